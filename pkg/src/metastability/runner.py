"""
Scenario execution.
"""
from __future__ import annotations

import logging
import os
import queue
import threading
import time
from typing import Any, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader

from metastability.bounds import fmcp_bound, phi_i, phi_km, psi_km
from metastability.numerics import CapExceededError, Caps, format_nat, format_rational
from metastability.oracle import (
    Outcome,
    Status,
    verify_fmcp,
    verify_ishikawa_theorem,
    verify_km_theorem,
    verify_lipschitz_theorem,
)
from metastability.protocol import Report, ReportEntry, Scenario, Theorem

logger = logging.getLogger(__name__)


def compute_bound(scenario: Scenario, caps: Caps) -> Dict[str, Any]:
    """
    The bound of `scenario` and its full trace, without running the oracle.

    :raise CapExceededError: if the bound is too large to compute.
    """
    theorem, eps, g = scenario.theorem, scenario.epsilon, scenario.g
    result: Dict[str, Any] = dict(id=scenario.id, theorem=theorem.value)
    if theorem == Theorem.FMCP:
        bound = fmcp_bound(eps, g, caps)
        result.update(bound=format_nat(bound), trace=dict(bound=format_nat(bound)))
    elif theorem == Theorem.KM:
        assert scenario.omega is not None and scenario.beta is not None
        km = phi_km(eps, g, scenario.omega, scenario.beta, caps)
        result.update(bound=format_nat(km.phi), trace=km.to_json())
    elif theorem == Theorem.ISHIKAWA:
        assert scenario.omega is not None and scenario.beta is not None
        assert scenario.gamma is not None
        ish = phi_i(eps, g, scenario.omega, scenario.beta, scenario.gamma, caps)
        result.update(bound=format_nat(ish.phi), trace=ish.to_json())
    else:
        assert scenario.delta is not None
        psi = psi_km(eps, g, scenario.delta, caps)
        result.update(bound=format_nat(psi.psi), trace=psi.to_json())
    result["epsilon"] = format_rational(eps)
    return result


def verify_scenario(scenario: Scenario, caps: Caps) -> Outcome:
    """Certify the hypotheses of `scenario`, compute its bound and search."""
    sc = scenario
    if sc.theorem == Theorem.FMCP:
        return verify_fmcp(sc.scheme, sc.f, sc.t, sc.s, sc.x0, sc.epsilon, sc.g, caps)
    if sc.theorem == Theorem.KM:
        assert sc.omega is not None and sc.beta is not None
        return verify_km_theorem(
            sc.f, sc.t, sc.x0, sc.epsilon, sc.g, sc.omega, sc.beta, caps, sc.scheme
        )
    if sc.theorem == Theorem.ISHIKAWA:
        assert sc.t is not None and sc.s is not None
        assert sc.omega is not None and sc.beta is not None and sc.gamma is not None
        return verify_ishikawa_theorem(
            sc.f, sc.t, sc.s, sc.x0, sc.epsilon, sc.g, sc.omega, sc.beta, sc.gamma, caps
        )
    assert sc.delta is not None
    return verify_lipschitz_theorem(
        sc.f, sc.t, sc.x0, sc.epsilon, sc.g, sc.delta, caps, sc.scheme
    )


def work(
    tasks: queue.Queue, runner: ScenarioRunner, results: Dict[str, ReportEntry]
) -> None:
    """Verify scenarios from `tasks` until a `None` sentinel arrives."""
    thread = threading.current_thread()
    logger.debug("%s: Worker thread starts." % thread.name)
    while True:
        scenario = tasks.get()
        try:
            if scenario is None:
                break
            entry = runner.run_one(scenario)
            with runner.lock:
                results[scenario.id] = entry
        finally:
            tasks.task_done()
    logger.debug("%s: Worker thread terminates." % thread.name)


class ScenarioRunner(object):
    """
    Verifies scenarios on a pool of worker threads.

    One failing scenario never aborts the batch: any exception is logged and
    recorded as a `failed` entry, except that a cap passed outside the
    oracle's own handling is recorded as `bound-only`.

    :param jobs: number of worker threads.
    :param caps: base caps, default from the environment.
    :param timings: record wall times in the report.
    :param overrides: command line cap overrides (``nat_bits``, ``horizon``,
        ``search``); `None` values are ignored.

    Example::

        runner = ScenarioRunner(jobs=4, horizon=2000)
        report = runner.run(protocol.load("corpus.json"))
        print(runner.render("summary.txt.j2", dict(report=report.to_json())))
    """

    _env = Environment(
        loader=FileSystemLoader(
            os.path.join(os.path.abspath(os.path.dirname(__file__)), "templates")
        ),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )

    def __init__(
        self,
        jobs: int = 1,
        caps: Optional[Caps] = None,
        timings: bool = False,
        **overrides: Optional[int],
    ):
        if jobs < 1:
            raise ValueError("jobs must be positive, got %d" % jobs)
        self.jobs = jobs
        self.caps = caps or Caps.from_env()
        self.timings = timings
        self.overrides = overrides
        self.lock = threading.Lock()

    def caps_for(self, scenario: Scenario) -> Caps:
        return scenario.resolve_caps(self.caps, **self.overrides)

    def run_one(self, scenario: Scenario) -> ReportEntry:
        start = time.perf_counter()
        try:
            outcome = verify_scenario(scenario, self.caps_for(scenario))
        except CapExceededError as e:
            logger.warning("%s: %s" % (scenario.id, e))
            outcome = Outcome(Status.BOUND_ONLY, reason=str(e))
        except Exception as e:
            logger.exception(e)
            outcome = Outcome(Status.FAILED, reason="%s: %s" % (type(e).__name__, e))
        elapsed = time.perf_counter() - start
        logger.info(
            "%s: %s (%.3f s)" % (scenario.id, outcome.status.value, elapsed)
        )
        return ReportEntry(
            id=scenario.id,
            theorem=scenario.theorem,
            epsilon=scenario.epsilon,
            outcome=outcome,
            wall_time=elapsed if self.timings else None,
        )

    def run(self, scenarios: List[Scenario]) -> Report:
        """Verify every scenario; entries come back sorted by id."""
        results: Dict[str, ReportEntry] = dict()
        if self.jobs == 1:
            for scenario in scenarios:
                results[scenario.id] = self.run_one(scenario)
        else:
            tasks: queue.Queue = queue.Queue()
            workers = [
                threading.Thread(target=work, args=(tasks, self, results), daemon=True)
                for _ in range(min(self.jobs, max(1, len(scenarios))))
            ]
            for thread in workers:
                thread.start()
            for scenario in scenarios:
                tasks.put(scenario)
            for _ in workers:
                tasks.put(None)
            for thread in workers:
                thread.join()
        return Report([results[key] for key in sorted(results)])

    def render(self, template_file: str, context: Dict[str, Any]) -> str:
        """Render a text template shipped with the package."""
        return self._env.get_template(template_file).render(context)
