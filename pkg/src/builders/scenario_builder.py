import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.config import Config, OVERRIDABLE, Solver
from src.solutions.base import ExactSolution
from src.solutions.hodograph import (
    GenHodographSolution, RegularSolution, SingularSolution,
    UltraSingularSolution
)
from src.solutions.reductions import make_reduction
from src.solutions.sampling import GridSpec
from src.solvers.upwind_solver import SolverConfig
from src.telegraph.functions import (
    AffineFn, ExpFn, ExpTheta, IdentityFn, MonotoneFn, OddCubicFn, PolyTheta,
    TanhFn, ThetaFn
)
from src.telegraph.modes import (
    ConstMode, DampedMode, ExpMode, ExpVMode, LinUMode, QuadMode, RiemannForm,
    TelegraphFn, adjoint_form
)
from src.util.errors import DriftFluxError, ScenarioError

PROJECT_ROOT = Path(__file__).absolute().parents[2]
import sys; sys.path.append(str(PROJECT_ROOT))  # noqa


@dataclass
class Scenario:
    name: str
    raw: Dict
    solution: ExactSolution
    grid: GridSpec
    seed: int = Config.SEED
    threads: int = Config.THREADS
    solver: Dict = field(default_factory=dict)
    verify: Dict = field(default_factory=dict)
    overrides: Dict = field(default_factory=dict)
    outputs: Dict = field(default_factory=dict)

    @property
    def hash(self) -> str:
        text = json.dumps(self.raw, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(text.encode('utf-8')).hexdigest()


def _require(data: Dict, key: str, path: str):
    if not isinstance(data, dict) or key not in data:
        raise ScenarioError(f'{path}.{key}' if path else key)
    return data[key]


def _pair(value, key: str) -> Tuple[float, float]:
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ScenarioError(key, f"scenario key '{key}' must be a pair of numbers")
    return lo, hi


class ScenarioBuilder:
    """Builds solution objects, grids and solver settings from scenario JSON."""

    MODES: Dict[str, Callable[[Dict], Any]] = {
        'const': lambda d: ConstMode(),
        'lin_u': lambda d: LinUMode(),
        'exp_v': lambda d: ExpVMode(),
        'quad': lambda d: QuadMode(),
        'exp': lambda d: (ExpMode(float(d['lambda']), float(d['mu']))
                          if 'mu' in d else
                          ExpMode.from_branch(float(d['lambda']),
                                              d.get('branch', '+'))),
        'damped': lambda d: DampedMode.from_branch(
            float(d['k']), d.get('branch', '+'), float(d.get('phase', 0.0))),
    }

    MONOTONE: Dict[str, Callable[[Dict], MonotoneFn]] = {
        'identity': lambda d: IdentityFn(),
        'affine': lambda d: AffineFn(float(d['alpha']),
                                     float(d.get('beta', 0.0))),
        'exp': lambda d: ExpFn(),
        'tanh': lambda d: TanhFn(),
        'cubic': lambda d: OddCubicFn(float(d.get('a', 1.0)),
                                      float(d.get('b', 1.0))),
    }

    THETA: Dict[str, Callable[[Dict], ThetaFn]] = {
        'poly': lambda d: PolyTheta(d.get('coefs', ())),
        'exp': lambda d: ExpTheta(float(d['alpha']),
                                  float(d.get('coef', 1.0))),
    }

    def __init__(self, *args, **kwargs):
        self.scenario_dir = kwargs.get('scenario_dir', Config.SCENARIO_DIR)

    def telegraph(self, terms: List[Dict], key: str) -> TelegraphFn:
        if not isinstance(terms, list) or not terms:
            raise ScenarioError(key, f"scenario key '{key}' must be a "
                                     f"non-empty list of modes")
        out = []
        for i, term in enumerate(terms):
            name = _require(term, 'mode', f'{key}[{i}]')
            if name not in self.MODES:
                raise ScenarioError(f'{key}[{i}].mode',
                                    f'unknown telegraph mode {name!r}')
            try:
                mode = self.MODES[name](term)
            except KeyError as e:
                raise ScenarioError(f'{key}[{i}].{e.args[0]}')
            out.append((float(term.get('coef', 1.0)), mode))
        return TelegraphFn(tuple(out))

    def monotone(self, spec: Optional[Dict], key: str) -> MonotoneFn:
        if spec is None:
            return IdentityFn()
        kind = _require(spec, 'kind', key)
        if kind not in self.MONOTONE:
            raise ScenarioError(f'{key}.kind', f'unknown monotone map {kind!r}')
        try:
            return self.MONOTONE[kind](spec)
        except KeyError as e:
            raise ScenarioError(f'{key}.{e.args[0]}')

    def theta(self, spec: Optional[Dict], key: str) -> ThetaFn:
        if spec is None:
            return PolyTheta(())
        kind = _require(spec, 'kind', key)
        if kind not in self.THETA:
            raise ScenarioError(f'{key}.kind', f'unknown Theta {kind!r}')
        try:
            return self.THETA[kind](spec)
        except KeyError as e:
            raise ScenarioError(f'{key}.{e.args[0]}')

    def psi_form(self, terms: List[Dict], key: str) -> RiemannForm:
        return adjoint_form(self.telegraph(terms, key))

    def _common(self, spec: Dict, key: str) -> Dict:
        kwargs = {'W': self.monotone(spec.get('W'), f'{key}.W')}
        for name in ('tol', 'max_iter', 'degeneracy_tol', 'fd_step'):
            if name in spec:
                kwargs[name] = spec[name]
        if 'guess' in spec:
            kwargs['guess'] = _pair(spec['guess'], f'{key}.guess')
        return kwargs

    def solution(self, spec: Dict, key: str = 'solution') -> ExactSolution:
        family = _require(spec, 'family', key)
        kwargs = self._common(spec, key)
        if family == 'regular':
            phi = self.telegraph(_require(spec, 'phi', key), f'{key}.phi')
            if 'validity' in spec:
                kwargs['validity'] = (_pair(spec['validity'][0], f'{key}.validity'),
                                      _pair(spec['validity'][1], f'{key}.validity'))
            return RegularSolution(phi, **kwargs)
        if family == 'singular':
            if 'interval' in spec:
                kwargs['interval'] = _pair(spec['interval'], f'{key}.interval')
            return SingularSolution(int(_require(spec, 'eps', key)),
                                    float(spec.get('c', 0.0)),
                                    self.theta(spec.get('theta'), f'{key}.theta'),
                                    **kwargs)
        if family == 'ultra':
            return UltraSingularSolution(float(spec.get('u0', 0.0)),
                                         float(spec.get('v0', 0.0)), **kwargs)
        if family == 'genhodograph':
            if 'from_regular' in spec:
                return GenHodographSolution.from_regular(
                    self.solution(dict(spec['from_regular'], family='regular'),
                                  f'{key}.from_regular'))
            phi = self.telegraph(_require(spec, 'phi', key), f'{key}.phi')
            F = self.monotone(spec['F'], f'{key}.F') if 'F' in spec else None
            kwargs.pop('W')
            return GenHodographSolution(RiemannForm(phi), F,
                                        r3=float(spec.get('r3', 0.0)), **kwargs)
        if family == 'reduction':
            tag = _require(spec, 'tag', key)
            params = dict(spec.get('params', {}))
            for name in ('interval', 'anchor'):
                if name in params and isinstance(params[name], list):
                    params[name] = tuple(params[name])
            psi = self.monotone(spec['psi'], f'{key}.psi') if 'psi' in spec else None
            return make_reduction(tag, psi, **params, **kwargs)
        raise ScenarioError(f'{key}.family', f'unknown solution family {family!r}')

    def grid(self, spec: Dict, key: str = 'grid') -> GridSpec:
        return GridSpec(_pair(_require(spec, 't', key), f'{key}.t'),
                        _pair(_require(spec, 'x', key), f'{key}.x'),
                        int(spec.get('nt', 64)), int(spec.get('nx', 64)))

    def solver(self, spec: Dict, sol: ExactSolution,
               key: str = 'solver') -> Dict:
        t_start = float(_require(spec, 't_start', key))
        cfg = SolverConfig(
            t_end=float(_require(spec, 't_end', key)),
            cfl=float(spec.get('cfl', Solver.CFL)),
            boundary=spec.get('boundary', 'exact'),
            exact=sol,
            snapshots=int(spec.get('snapshots', 0)),
        )
        return {
            't_start': t_start,
            'x': _pair(_require(spec, 'x', key), f'{key}.x'),
            'cells': int(spec.get('cells', 128)),
            'convergence_cells': tuple(
                spec.get('convergence_cells', Solver.CONVERGENCE_CELLS)),
            'config': cfg,
        }

    def _overrides(self, spec: Dict) -> Dict:
        for section, values in spec.items():
            if section not in OVERRIDABLE:
                raise ScenarioError(f'overrides.{section}')
            for name in values:
                if not hasattr(OVERRIDABLE[section], name):
                    raise ScenarioError(f'overrides.{section}.{name}')
        return spec

    def build(self, data: Dict) -> Scenario:
        if not isinstance(data, dict):
            raise ScenarioError('<root>', 'scenario must be a JSON object')
        name = data.get('name', 'scenario')
        try:
            sol = self.solution(_require(data, 'solution', ''))
        except ScenarioError:
            raise
        except (KeyError, TypeError, ValueError, DriftFluxError) as e:
            raise ScenarioError('solution', f'invalid solution: {e}')
        grid = self.grid(_require(data, 'grid', ''))
        try:
            solver = self.solver(data['solver'], sol) if 'solver' in data else {}
        except ScenarioError:
            raise
        except (TypeError, ValueError, DriftFluxError) as e:
            raise ScenarioError('solver', f'invalid solver settings: {e}')
        return Scenario(
            name=name,
            raw=data,
            solution=sol,
            grid=grid,
            seed=int(data.get('seed', Config.SEED)),
            threads=int(data.get('threads', Config.THREADS)),
            solver=solver,
            verify=data.get('verify', {}),
            overrides=self._overrides(data.get('overrides', {})),
            outputs=data.get('outputs', {}),
        )

    def resolve(self, name_or_path: str) -> Path:
        path = Path(name_or_path)
        if path.exists():
            return path
        bundled = Path(self.scenario_dir) / f'{name_or_path}.json'
        if bundled.exists():
            return bundled
        raise ScenarioError('--scenario', f'scenario {name_or_path!r} not found')

    def load(self, name_or_path: str) -> Scenario:
        """Load a scenario file or a bundled scenario by name."""
        path = self.resolve(name_or_path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ScenarioError('<root>', f'malformed JSON in {path}: {e}')
        return self.build(data)
