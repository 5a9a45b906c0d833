"""Figure-reproduction pipelines and parameter sweeps"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

from attrs import evolve, field, frozen
from scipy.optimize import root_scalar

from config import SUPPORTED_FIGURES, VERSION, SimulatorConfig
from exceptions import ValidationError
from models.coupler import CouplerParams, SystemKind, propagator
from models.spectrum import eigen_spectrum
from services.fock_evolution import (
    Normalization,
    SourceModel,
    hom_curve,
    interference_term,
    normalize_probs,
    two_photon_probs_dist,
    two_photon_probs_indist,
    visibility,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

CONVENTIONS = {
    "propagator": "U(z) = exp(-i H z)",
    "mode_index": "1 = lossless waveguide, 2 = lossy waveguide",
    "probabilities": "post-selected on both photons surviving",
}

# Grids must span at least this many coherence times on each side
DELAY_SPAN_IN_TAU_C = 5.0


def _grid(value: Iterable[float]) -> tuple[float, ...]:
    return tuple(float(v) for v in value)


def _check_grid(name: str, grid: tuple[float, ...]) -> None:
    if not grid:
        raise ValidationError(f"{name} must not be empty")
    if any(not math.isfinite(v) for v in grid):
        raise ValidationError(f"{name} must be finite")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValidationError(f"{name} must be sorted ascending")


def _gamma_grid_valid(instance, attribute, value) -> None:
    _check_grid(attribute.name, value)
    if value[0] < 0:
        raise ValidationError(f"{attribute.name} must be >= 0, got {value[0]}")


def _delay_grid_valid(instance, attribute, value) -> None:
    _check_grid(attribute.name, value)


def _positive(instance, attribute, value) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{attribute.name} must be positive, got {value}")


def _figure_valid(instance, attribute, value) -> None:
    if value is not None and not SimulatorConfig.is_valid_figure(value):
        raise ValidationError(
            f"Invalid figure_id: {value}. "
            f"Must be one of: {', '.join(SUPPORTED_FIGURES.keys())}"
        )


def _tolerance_valid(instance, attribute, value) -> None:
    if not 0 <= value < instance.length:
        raise ValidationError(f"length_tolerance must lie in [0, length), got {value}")


@frozen
class SweepSpec:
    """Everything needed to re-run a sweep bit-identically"""

    kind: SystemKind = field(converter=SystemKind)
    kappa: float = field(converter=float, validator=_positive)
    length: float = field(converter=float, validator=_positive)
    gamma_grid: tuple[float, ...] = field(converter=_grid, validator=_gamma_grid_valid)
    delay_grid: tuple[float, ...] = field(converter=_grid, validator=_delay_grid_valid)
    source: SourceModel = field(factory=SourceModel)
    normalization: Normalization = field(
        default=Normalization.NONE, converter=Normalization
    )
    figure_id: Optional[str] = field(default=None, validator=_figure_valid)
    idealized: bool = False
    length_tolerance: float = field(default=0.0, converter=float, validator=_tolerance_valid)

    def params(self, gamma: float, length: Optional[float] = None) -> CouplerParams:
        params = CouplerParams(kappa=self.kappa, gamma=gamma, length=self.length)
        return params if length is None else params.with_length(length)

    def as_metadata(self) -> Dict[str, Any]:
        return {
            "figure_id": self.figure_id,
            "kind": self.kind.value,
            "kappa": self.kappa,
            "length": self.length,
            "idealized": self.idealized,
            "length_tolerance": self.length_tolerance,
            "gamma_grid": list(self.gamma_grid),
            "delay_grid": list(self.delay_grid),
            "source": {
                "tau_c": self.source.tau_c,
                "v_max": self.source.v_max,
                "accidentals": self.source.accidentals,
            },
            "normalization": self.normalization.value,
        }


def _columns(value: Dict[str, Iterable[float]]) -> Dict[str, tuple[float, ...]]:
    return {str(name): tuple(float(v) for v in col) for name, col in value.items()}


def _columns_valid(instance, attribute, value) -> None:
    lengths = {len(col) for col in value.values()}
    if len(lengths) > 1:
        raise ValidationError(f"All columns must have equal length, got {sorted(lengths)}")


@frozen
class SweepTable:
    """Columnar sweep result plus the metadata that produced it"""

    columns: Dict[str, tuple[float, ...]] = field(
        converter=_columns, validator=_columns_valid
    )
    metadata: Dict[str, Any] = field(factory=dict)

    @property
    def column_names(self) -> List[str]:
        return list(self.columns)

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values()), ()))


class ExperimentService:
    """Runs the figure pipelines with defaults taken from a SimulatorConfig"""

    def __init__(self, config: SimulatorConfig):
        self.config = config
        self.max_workers = config.max_workers

    def _map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Order-preserving map, threaded when max_workers > 1"""
        if self.max_workers <= 1 or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(fn, items))

    def _metadata(self, sweep: Optional[SweepSpec], **extra: Any) -> Dict[str, Any]:
        metadata: Dict[str, Any] = {
            "tool": "ptcoupler-hom",
            "version": VERSION,
            "conventions": dict(CONVENTIONS),
        }
        if sweep is not None:
            metadata["spec"] = sweep.as_metadata()
        metadata.update(extra)
        return metadata

    def build_spec(self, figure_id: Optional[str] = None, **overrides: Any) -> SweepSpec:
        """
        Build a SweepSpec from the loaded configuration.

        Args:
            figure_id: figure pipeline; selects the default grid and system kind
            overrides: SweepSpec fields that replace the configured values

        Returns:
            Validated SweepSpec
        """
        cfg = self.config
        kind = cfg.kind
        normalization = cfg.normalization
        if figure_id in ("fig3bcd", "fig3e"):
            kind = SystemKind.BARE
        elif figure_id == "fig4b":
            kind = SystemKind.SANDWICHED
        if figure_id in ("fig3e", "fig4b"):
            normalization = Normalization.DIST_RATE

        values: Dict[str, Any] = {
            "kind": kind,
            "kappa": cfg.kappa,
            "length": cfg.effective_length(),
            "gamma_grid": cfg.resolve_gamma_grid(figure_id),
            "delay_grid": cfg.resolve_delay_grid(),
            "source": cfg.source_model(),
            "normalization": normalization,
            "figure_id": figure_id,
            "idealized": cfg.idealized,
            "length_tolerance": cfg.length_tolerance,
        }
        values.update(overrides)
        return SweepSpec(**values)

    def run_fig2b(self, kappa: float, gamma_grid: Sequence[float]) -> SweepTable:
        """Kappa-normalized eigenvalue branches of H_bare across the sweep"""
        grid = _grid(gamma_grid)
        _check_grid("gamma_grid", grid)
        if kappa <= 0:
            raise ValidationError(f"kappa must be positive, got {kappa}")

        points = eigen_spectrum(grid, kappa)
        table = SweepTable(
            columns={
                "gamma_over_kappa": [p.gamma_over_kappa for p in points],
                "re_l1": [p.re_l1 / kappa for p in points],
                "re_l2": [p.re_l2 / kappa for p in points],
                "im_l1": [p.im_l1 / kappa for p in points],
                "im_l2": [p.im_l2 / kappa for p in points],
            },
            metadata=self._metadata(
                None,
                spec={"figure_id": "fig2b", "kappa": float(kappa), "gamma_grid": list(grid)},
                units="eigenvalues in units of kappa",
            ),
        )
        logger.info(f"fig2b: {table.n_rows} spectrum rows")
        return table

    def run_fig3bcd(self, spec: SweepSpec) -> SweepTable:
        """Two-photon outcome probabilities of the bare coupler versus loss"""
        if spec.kind is not SystemKind.BARE:
            raise ValidationError("fig3bcd describes the bare coupler; kind must be bare")

        def row(gamma: float) -> Dict[str, float]:
            u = propagator(spec.params(gamma), SystemKind.BARE)
            indist = two_photon_probs_indist(u)
            dist = two_photon_probs_dist(u)
            values = {"gamma": gamma}
            values.update(normalize_probs(indist, spec.normalization, dist).as_dict("_indist"))
            values.update(normalize_probs(dist, spec.normalization, dist).as_dict("_dist"))
            values["survival_indist"] = indist.total
            values["survival_dist"] = dist.total
            return values

        rows = self._map(row, spec.gamma_grid)
        names = list(rows[0])
        table = SweepTable(
            columns={name: [r[name] for r in rows] for name in names},
            metadata=self._metadata(spec),
        )
        logger.info(f"fig3bcd: {table.n_rows} rows, normalization={spec.normalization}")
        return table

    def _check_delay_span(self, spec: SweepSpec) -> None:
        span = DELAY_SPAN_IN_TAU_C * spec.source.tau_c
        if spec.delay_grid[0] > -span or spec.delay_grid[-1] < span:
            raise ValidationError(
                f"delay_grid must span at least +/-{span:g} ps "
                f"({DELAY_SPAN_IN_TAU_C:g} tau_c)"
            )

    def _run_hom_traces(self, spec: SweepSpec, kind: SystemKind, figure_id: str) -> SweepTable:
        spec = evolve(
            spec, kind=kind, normalization=Normalization.DIST_RATE, figure_id=figure_id
        )
        self._check_delay_span(spec)

        names = [f"rate_gamma_{g:.4f}" for g in spec.gamma_grid]
        if len(set(names)) != len(names):
            raise ValidationError("gamma_grid values must differ in the fourth decimal")

        curves = self._map(
            lambda g: hom_curve(propagator(spec.params(g), kind), spec.source, spec.delay_grid),
            spec.gamma_grid,
        )

        columns: Dict[str, Sequence[float]] = {"delay_ps": spec.delay_grid}
        for name, curve in zip(names, curves):
            columns[name] = curve.rates

        traces = [
            {
                "column": name,
                "gamma": g,
                "gamma_over_kappa": g / spec.kappa,
                "visibility": curve.visibility,
            }
            for name, g, curve in zip(names, spec.gamma_grid, curves)
        ]
        table = SweepTable(columns=columns, metadata=self._metadata(spec, traces=traces))
        logger.info(f"{figure_id}: {len(curves)} traces x {table.n_rows} delays")
        return table

    def run_fig3e(self, spec: SweepSpec) -> SweepTable:
        """HOM traces of the bare coupler, one rate column per loss value"""
        return self._run_hom_traces(spec, SystemKind.BARE, "fig3e")

    def run_fig4b(self, spec: SweepSpec) -> SweepTable:
        """HOM traces of the sandwiched coupler, one rate column per loss value"""
        return self._run_hom_traces(spec, SystemKind.SANDWICHED, "fig4b")

    def run_fig4c(self, spec: SweepSpec) -> SweepTable:
        """
        HOM visibility of bare and sandwiched coupler versus gamma/kappa.

        With length_tolerance > 0 the min/max over z - dz, z, z + dz are added
        as band columns.
        """
        if not spec.gamma_grid[0] <= spec.kappa <= spec.gamma_grid[-1]:
            raise ValidationError("fig4c gamma_grid must cross the exceptional point gamma = kappa")

        src = spec.source
        dz = spec.length_tolerance
        lengths = [spec.length] if dz == 0 else [spec.length - dz, spec.length, spec.length + dz]

        def row(gamma: float) -> Dict[str, float]:
            bare = []
            sandwiched = []
            for z in lengths:
                params = spec.params(gamma, z)
                bare.append(visibility(propagator(params, SystemKind.BARE), src.v_max, src.accidentals))
                sandwiched.append(
                    visibility(propagator(params, SystemKind.SANDWICHED), src.v_max, src.accidentals)
                )
            nominal = lengths.index(spec.length)
            values = {
                "gamma_over_kappa": gamma / spec.kappa,
                "visibility_bare": bare[nominal],
                "visibility_sandwiched": sandwiched[nominal],
            }
            if dz > 0:
                values["visibility_bare_min"] = min(bare)
                values["visibility_bare_max"] = max(bare)
                values["visibility_sandwiched_min"] = min(sandwiched)
                values["visibility_sandwiched_max"] = max(sandwiched)
            return values

        rows = self._map(row, spec.gamma_grid)
        names = list(rows[0])
        flip = self.find_bare_flip(spec.kappa, spec.length)
        table = SweepTable(
            columns={name: [r[name] for r in rows] for name in names},
            metadata=self._metadata(
                evolve(spec, figure_id="fig4c"),
                bare_flip_gamma=flip,
                bare_flip_gamma_over_kappa=None if flip is None else flip / spec.kappa,
            ),
        )
        logger.info(f"fig4c: {table.n_rows} rows, bare flip at gamma={flip}")
        return table

    def find_bare_flip(
        self, kappa: float, length: float, upper: Optional[float] = None
    ) -> Optional[float]:
        """
        Loss gamma* at which the bare-coupler interference term J changes sign.

        Args:
            kappa: coupling rate (1/cm)
            length: coupler length (cm)
            upper: bracket end, default 10 kappa

        Returns:
            gamma* in 1/cm, or None when J keeps its sign on [0, upper]
        """
        hi = 10 * kappa if upper is None else float(upper)

        def j_of_gamma(gamma: float) -> float:
            return interference_term(
                propagator(CouplerParams(kappa=kappa, gamma=gamma, length=length))
            )

        j_lo, j_hi = j_of_gamma(0.0), j_of_gamma(hi)
        if j_lo == 0:
            return 0.0
        if j_lo * j_hi > 0:
            logger.warning(
                f"No sign change of J on [0, {hi:g}] for kappa={kappa}, length={length}"
            )
            return None

        result = root_scalar(j_of_gamma, bracket=[0.0, hi], method="bisect", xtol=1e-13)
        return float(result.root)

    def point_probs(self, spec: SweepSpec, gamma: float) -> Dict[str, Any]:
        """Normalized two-photon probabilities at a single loss value"""
        u = propagator(spec.params(gamma), spec.kind)
        indist = two_photon_probs_indist(u)
        dist = two_photon_probs_dist(u)

        result: Dict[str, Any] = {
            "kind": spec.kind.value,
            "kappa": spec.kappa,
            "gamma": float(gamma),
            "length": spec.length,
            "normalization": spec.normalization.value,
        }
        result.update(normalize_probs(indist, spec.normalization, dist).as_dict("_indist"))
        result.update(normalize_probs(dist, spec.normalization, dist).as_dict("_dist"))
        result["survival_indist"] = indist.total
        result["survival_dist"] = dist.total
        result["interference_term"] = interference_term(u)
        return result

    def point_visibility(self, spec: SweepSpec, gamma: float) -> Dict[str, Any]:
        """HOM visibility at a single loss value"""
        u = propagator(spec.params(gamma), spec.kind)
        src = spec.source
        return {
            "kind": spec.kind.value,
            "kappa": spec.kappa,
            "gamma": float(gamma),
            "length": spec.length,
            "v_max": src.v_max,
            "accidentals": src.accidentals,
            "interference_term": interference_term(u),
            "p11_dist": two_photon_probs_dist(u).p11,
            "visibility": visibility(u, src.v_max, src.accidentals),
        }

    def run_hom(self, spec: SweepSpec, gamma: float) -> SweepTable:
        """Single HOM trace over the sweep's delay grid"""
        curve = hom_curve(propagator(spec.params(gamma), spec.kind), spec.source, spec.delay_grid)
        return SweepTable(
            columns={"delay_ps": curve.delays, "rate": curve.rates},
            metadata=self._metadata(
                evolve(spec, gamma_grid=(gamma,), normalization=Normalization.DIST_RATE),
                visibility=curve.visibility,
            ),
        )

    def run_figure(self, figure_id: str, spec: Optional[SweepSpec] = None) -> SweepTable:
        """Dispatch a figure pipeline by id"""
        if not SimulatorConfig.is_valid_figure(figure_id):
            raise ValidationError(
                f"Unknown figure: {figure_id}. "
                f"Must be one of: {', '.join(SUPPORTED_FIGURES.keys())}"
            )
        spec = spec or self.build_spec(figure_id)
        if figure_id == "fig2b":
            return self.run_fig2b(spec.kappa, spec.gamma_grid)
        if figure_id == "fig3bcd":
            return self.run_fig3bcd(spec)
        if figure_id == "fig3e":
            return self.run_fig3e(spec)
        if figure_id == "fig4b":
            return self.run_fig4b(spec)
        return self.run_fig4c(spec)
