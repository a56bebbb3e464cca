import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from threading import Lock
from typing import Dict, List, Tuple

import numpy as np
from colorama import Fore, Style

from src.algebra.lie_algebra import parse_gvector
from src.builders.scenario_builder import Scenario, ScenarioBuilder
from src.config import Config, Tolerance, config_overrides
from src.solutions.hodograph import RegularSolution
from src.solutions.sampling import GridSpec
from src.telegraph.modes import (
    ExpMode, ExpVMode, QuadMode, TelegraphFn, adjoint_form, to_riemann_form
)
from src.util.errors import DriftFluxError
from src.util.utils import progress_bar
from src.verifiers import (
    conservation_verifier as cv, gensym_verifier as gv,
    hamiltonian_verifier as hv, residual_verifier as rv,
    symmetry_verifier as sv
)
from src.verifiers.results import CheckResult, tolerance_check

SUITES = ('residual', 'orbit', 'flow', 'gensym', 'conservation',
          'hamiltonian', 'omega-chain')


class SuiteRunner:
    """Runs named verification suites on a scenario and collects CheckResults."""

    MAX_WORKERS = Config.THREADS

    def __init__(self, *args, **kwargs):
        self.max_workers = kwargs.get('threads', self.MAX_WORKERS)
        self.verbose = kwargs.get('verbose', False)
        self.builder = ScenarioBuilder()
        self.stats_lock = Lock()
        self._initialize_stats()

    def _initialize_stats(self) -> None:
        """Initialize statistics counters."""
        self.stats = {
            'total': 0,
            'passed': 0,
            'failed': 0,
            'errors': Counter()
        }

    # Scenario accessors

    @staticmethod
    def _window(sc: Scenario) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        w = sc.verify.get('window')
        if w is None:
            return sc.grid.t, sc.grid.x
        return tuple(w['t']), tuple(w['x'])

    def _points(self, sc: Scenario, section: Dict) -> List[Tuple[float, float]]:
        if 'points' in section:
            return [tuple(p) for p in section['points']]
        (t0, t1), (x0, x1) = self._window(sc)
        return [(0.5 * (t0 + t1), 0.5 * (x0 + x1))]

    # Suites

    def _suite_residual(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('residual', {})
        sol = sc.solution
        checks = [rv.residual_check(sol, sc.grid, True, sc.threads)]
        if section.get('fd', True):
            checks.append(rv.residual_check(sol, sc.grid, False, sc.threads))
        trichotomy = rv.trichotomy_check(sol, sc.grid, sc.threads)
        if trichotomy is not None:
            checks.append(trichotomy)
        if isinstance(sol, RegularSolution):
            checks.append(rv.equivalence_check(
                sol, self._window(sc), section.get('equivalence_points', 100),
                rng))
        return checks

    def _suite_orbit(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('orbit', {})
        points = self._points(sc, section)
        count = section.get('transforms', 20)
        params = [sv.reflection_tx(), sv.reflection_w()]
        params += [sv.random_params(rng) for _ in range(max(0, count - 2))]
        pairs = [(sv.random_params(rng), sv.random_params(rng))
                 for _ in range(section.get('pairs', 5))]
        return [sv.orbit_check(sc.solution, params, points),
                sv.group_law_check(sc.solution, pairs, points)]

    def _suite_flow(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('flow', {})
        points = self._points(sc, section)
        checks = []
        for label in section.get('fields', ['D', 'G', 'Pt', 'Pv', 'W(w)']):
            Q = sv.J_BREVE if label == sv.J_BREVE else parse_gvector(label)
            checks.append(sv.flow_check(sc.solution, Q, label, points=points))
        return checks

    def _suite_gensym(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('gensym', {})
        jets = section.get('jets', 1000)
        phi = to_riemann_form(
            self.builder.telegraph(section['phi'], 'verify.gensym.phi')
            if 'phi' in section else TelegraphFn.single(ExpMode.from_branch(0.5)))
        omegas = section.get('omega', ['w0*w1', 'w0**2 + w1'])
        named = gv.named_characteristics(phi, omegas[0])
        W2 = gv.gensym_W(omegas[-1], 'W2')
        P2 = gv.gensym_P(to_riemann_form(TelegraphFn.single(ExpVMode())), 'P2')
        chars = list(named.values()) + [W2, gv.gensym_W('w1', 'W(w1)')]

        samples = [gv.random_jet(rng) for _ in range(jets)]
        phi_res = max(named['P'].phi_residual(j.state.r1, j.state.r2)
                      for j in samples[:100])
        checks = [
            tolerance_check('gensym/phi', phi_res, Tolerance.GENSYM),
            gv.determining_check(chars, jets, rng),
        ]
        D, G1, G2, P, W = (named[k] for k in ('D', 'G1', 'G2', 'P', 'W'))
        pairs = [(D, P), (G1, P), (G2, P), (D, W), (G1, W), (G2, W), (W, W2),
                 (P, P2), (D, G1), (G1, G2), (P, W), (W, W)]
        checks.extend(gv.commutator_table(pairs, section.get('commutator_jets',
                                                             100), rng))
        same = max(float(np.max(np.abs(
            gv.gensym_W('w1').partials(j).value - P2.partials(j).value)))
            for j in samples[:100])
        checks.append(tolerance_check('gensym/W(w1)=P(exp)', same,
                                      Tolerance.GENSYM))
        return checks

    def _currents(self, section: Dict) -> List[cv.ConservedCurrent]:
        psi = adjoint_form(
            self.builder.telegraph(section['psi'], 'verify.conservation.psi')
            if 'psi' in section else TelegraphFn.single(QuadMode()))
        factories = {
            'dhc': lambda: cv.DHC(),
            'ehc': lambda: cv.EHC(psi),
            'general': lambda: cv.GeneralZeroth(section.get('omega', 'w**2'),
                                                psi),
            'non-translation': lambda: cv.NonTranslation(),
            'c0': lambda: cv.C0(),
            'c1': lambda: cv.C1(section.get('c1_omega', 'w0*w1')),
            'weighted': lambda: cv.WeightedCurrent(
                section.get('c', 1.0), section.get('c1_omega', 'w0*w1')),
        }
        names = section.get('currents', ['dhc', 'ehc', 'general',
                                         'non-translation', 'c0', 'c1'])
        return [factories[name]() for name in names]

    def _suite_conservation(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('conservation', {})
        window = self._window(sc)
        checks = [cv.weights_check()]
        for cur in self._currents(section):
            if cur.ORDER == 0:
                checks.append(cv.pairing_check(cur, rng))
            elif not sc.solution.ANALYTIC_JET:
                continue
            checks.extend(cv.conservation_check(cur, sc.solution, window,
                                                section.get('n', 6),
                                                sc.threads))
        return checks

    def _suite_hamiltonian(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('hamiltonian', {})
        (t0, t1), (x0, x1) = self._window(sc)
        spec = GridSpec((t0, t1), (x0, x1), section.get('nt', 5),
                        section.get('nx', 10))
        return hv.hamiltonian_suite(sc.solution, spec, rng,
                                    section.get('lambdas', hv.LAMBDAS),
                                    sc.threads)

    def _suite_omega_chain(self, sc: Scenario, rng) -> List[CheckResult]:
        section = sc.verify.get('omega_chain', {})
        return [
            cv.omega_chain_check(sc.solution, iota, self._window(sc),
                                 section.get('n', 4), threads=sc.threads)
            for iota in section.get('iota', [0, 1, 2])
        ]

    # Runner

    def _run_suite(self, sc: Scenario, name: str) -> List[CheckResult]:
        """Run one suite; library errors become a failed row."""
        rng = np.random.default_rng(sc.seed + SUITES.index(name))
        method = getattr(self, '_suite_' + name.replace('-', '_'))
        try:
            checks = method(sc, rng)
        except DriftFluxError as e:
            with self.stats_lock:
                self.stats['errors'][str(e)] += 1
            checks = [CheckResult(f'{name}/error', float('nan'), float('nan'),
                                  False, 'error', {'error': str(e)})]
        with self.stats_lock:
            self.stats['total'] += len(checks)
            self.stats['passed'] += sum(c.passed for c in checks)
            self.stats['failed'] += sum(not c.passed for c in checks)
        return checks

    def run(self, sc: Scenario, suite: str = 'all') -> List[CheckResult]:
        """Run `suite` (or every suite) with the scenario's overrides applied."""
        names = list(SUITES) if suite == 'all' else [suite]
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise DriftFluxError(f'unknown suite {unknown[0]!r}; expected one '
                                 f'of {", ".join(SUITES + ("all",))}')
        self._initialize_stats()
        start_time = time.time()
        results: List[CheckResult] = []
        with config_overrides(sc.overrides):
            pbar = progress_bar(len(names), 'Running suites')
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                futures = [
                    executor.submit(self._run_suite, sc, name) for name in names
                ]
                for future in futures:
                    results.extend(future.result())
                    pbar.update(1)
            pbar.close()
        self._print_stats(results)
        print(f'Execution time: {time.time() - start_time:.2f} seconds')
        return results

    def _print_stats(self, results: List[CheckResult]) -> None:
        """Print verification statistics."""
        total = self.stats['total'] or 1
        print('\nVerification Statistics:')
        for c in results:
            if self.verbose or not c.passed:
                mark = f'{Fore.GREEN}PASS' if c.passed else f'{Fore.RED}FAIL'
                print(f'{mark}{Style.RESET_ALL} {c.name}: '
                      f'{c.value:.3e} ({c.kind}, threshold {c.threshold:.3g})')
        print(f"Total checks: {self.stats['total']}")
        print(f"Passed: {self.stats['passed']} "
              f"({(self.stats['passed']/total)*100:.1f}%)")
        print(f"Failed: {self.stats['failed']} "
              f"({(self.stats['failed']/total)*100:.1f}%)")

        if self.stats['errors']:
            print('\nCommon errors:')
            for error, count in self.stats['errors'].most_common(3):
                print(f'- {error}: {count} times')
