"""Elastic response spectra of the configured records."""

import numpy as np

from formatters.plots import spectrum_plot
from pipeline.experiment import Experiment
from signals.spectrum import default_periods, response_spectrum, write_spectrum_csv

from .base import BaseCommand, CommandContext, CommandResult
from .run import run_blocking


class SpectrumCommand(BaseCommand):
    name = "spectrum"

    async def __call__(self, context: CommandContext) -> CommandResult:
        config = context.config
        experiment = Experiment(config, context.cache)
        periods = np.asarray(config.get("spectrum.periods") or default_periods(), dtype=float)
        zeta = config["spectrum.damping"]

        def compute():
            return {r.id: response_spectrum(r, periods, zeta) for r in experiment.records}

        spectra = await run_blocking(compute, timeout=config.get("timeout"))
        out = context.outputs
        lines = []
        for record_id, sa in spectra.items():
            path = out.path(f"spectrum_{record_id}.csv")
            write_spectrum_csv(path, periods, sa)
            out.add(path)
            peak = int(np.argmax(sa))
            lines.append(f"{record_id}: peak Sa {sa[peak]:.3f} g at T={periods[peak]:.3f} s")
        out.add(spectrum_plot(periods, spectra, out.path("spectra.svg")))
        return CommandResult(output="\n".join(lines) or "no records configured", artifacts=tuple(out.artifacts))
