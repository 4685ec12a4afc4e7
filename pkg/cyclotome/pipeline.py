"""End-to-end runs: conditions, field, period table, connection set, verdict."""

import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cyclotome.config import SCHEMA, VERSION, Settings
from cyclotome.constructions import (
    ConditionReport,
    ConnectionSet,
    ConstructionKind,
    IndexTwoParams,
    build_D_A,
    build_D_B,
    build_scheme_relations,
    case_analysis_A,
    case_analysis_B,
    check_conditions_A,
    check_conditions_B,
    predicted_spectrum_A,
    predicted_values_B,
)
from cyclotome.cyclotomy import (
    CycSetup,
    PeriodTable,
    build_period_table,
    char_sum_all,
    check_gauss_properties,
    compare_gauss,
)
from cyclotome.errors import (
    CyclotomeError,
    GaussMismatch,
    NotTwoValued,
    SetupMismatch,
    SizeExceeded,
    SpectrumMismatch,
)
from cyclotome.gf import FieldTable, materialize
from cyclotome.graphio import GraphCodec, GraphFormat
from cyclotome.scan import ParameterScanner, ScanRow, table_rows
from cyclotome.utils import PhaseTimer
from cyclotome.verify import (
    distinct_values,
    restricted_spectrum,
    spectrum_matches,
    verify_paley_pds,
    verify_scheme,
    verify_skew_hds,
    verify_srg,
    verify_srg_direct,
)

logger = logging.getLogger(__name__)

# the two-prime case analysis allows at most this many distinct values
MAX_DISTINCT_VALUES_A = 5


class RunStatus(Enum):
    """Outcome of a run; each status maps to one process exit code."""

    VERIFIED = "verified"
    CONDITIONS_HOLD = "conditions_hold"
    FAILED = "failed"
    CONDITIONS_FAILED = "conditions_failed"
    USAGE = "usage_error"

    @property
    def exit_code(self) -> int:
        return {
            RunStatus.VERIFIED: 0,
            RunStatus.CONDITIONS_HOLD: 0,
            RunStatus.FAILED: 1,
            RunStatus.CONDITIONS_FAILED: 2,
            RunStatus.USAGE: 3,
        }[self]


@dataclass
class Instance:
    """The materialized objects behind a report."""

    table: PeriodTable
    D: Optional[ConnectionSet] = None
    relations: List[ConnectionSet] = field(default_factory=list)

    @property
    def field_table(self) -> FieldTable:
        return self.table.setup.field


@dataclass
class RunReport:
    """Result object returned by every CyclotomeRun command."""

    construction: str
    parameters: Dict[str, Any]
    conditions: List[Dict[str, Any]] = field(default_factory=list)
    spectrum: List[Dict[str, Any]] = field(default_factory=list)
    certificate: Optional[Dict[str, Any]] = None
    timings: Optional[Dict[str, float]] = None
    field_modulus: Optional[str] = None
    status: RunStatus = RunStatus.VERIFIED
    error: Optional[str] = None
    extras: Dict[str, Any] = field(default_factory=dict)
    artifact_version: str = VERSION
    instance: Optional[Instance] = field(default=None, repr=False, compare=False)

    @property
    def valid(self) -> bool:
        return self.status in (RunStatus.VERIFIED, RunStatus.CONDITIONS_HOLD)

    @property
    def exit_code(self) -> int:
        return self.status.exit_code

    def fail(self, status: RunStatus, error: str) -> "RunReport":
        self.status = status
        self.error = error
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "artifact_version": self.artifact_version,
            "construction": self.construction,
            "parameters": self.parameters,
            "field_modulus": self.field_modulus,
            "conditions": self.conditions,
            "spectrum": self.spectrum,
            "certificate": self.certificate,
            "timings": self.timings,
            "status": self.status.value,
            "valid": self.valid,
            "error": self.error,
            "extras": self.extras,
        }


class CyclotomeRun:
    """
    Runs the constructions end to end and captures the outcome in a RunReport.

    Verification failures never escape as exceptions; they set the report's
    status and error instead.

    Example:
        >>> runner = CyclotomeRun(Settings(threads=4))
        >>> report = runner.run_a(2, 5, 3, 1, 2)
        >>> report.certificate["lambda"], report.certificate["mu"]
        (20, 18)
    """

    def __init__(self, settings: Optional[Settings] = None, timings: bool = True):
        """
        Initialize the runner.

        Args:
            settings: Thresholds, worker count and cache directory
            timings: Whether reports carry per-phase timings
        """
        self.settings = settings or Settings.from_env()
        self.timings = timings
        self._fields: Dict[Tuple[int, int], FieldTable] = {}
        self._tables: Dict[Tuple[int, int, int], PeriodTable] = {}

    def field_table(self, p: int, f: int) -> FieldTable:
        key = (p, f)
        if key not in self._fields:
            self._fields[key] = materialize(
                p, f, cache_dir=self.settings.cache_dir, limit=self.settings.materialize_limit
            )
        return self._fields[key]

    def period_table(
        self, p: int, f: int, N: int, timer: Optional[PhaseTimer] = None
    ) -> PeriodTable:
        """Period table for GF(p^f) and class order N, built once per runner."""
        timer = timer or PhaseTimer()
        key = (p, f, N)
        if key not in self._tables:
            with timer.phase("field"):
                field_table = self.field_table(p, f)
            with timer.phase("periods"):
                self._tables[key] = build_period_table(
                    CycSetup(field_table, N), threads=self.settings.threads
                )
        return self._tables[key]

    # shared plumbing

    def _start(
        self, construction: str, conditions: Optional[ConditionReport], inputs: Dict[str, Any]
    ) -> RunReport:
        params = conditions.params if conditions else None
        return RunReport(
            construction=construction,
            parameters=params.to_dict() if params else inputs,
            conditions=conditions.as_list() if conditions else [],
        )

    def _gate(
        self, report: RunReport, conditions: ConditionReport, conditions_only: bool, force: bool
    ) -> bool:
        """Apply the condition outcome; False when the run stops here."""
        if conditions.params is None:
            report.fail(RunStatus.CONDITIONS_FAILED, f"conditions failed: {conditions.failed}")
            return False
        if conditions_only:
            if conditions.holds:
                report.status = RunStatus.CONDITIONS_HOLD
            else:
                report.fail(RunStatus.CONDITIONS_FAILED, f"conditions failed: {conditions.failed}")
            return False
        if not conditions.holds:
            if not force:
                report.fail(RunStatus.CONDITIONS_FAILED, f"conditions failed: {conditions.failed}")
                return False
            report.extras["forced"] = True
            logger.warning("conditions %s fail, materializing anyway", conditions.failed)
        return True

    def _finish(self, report: RunReport, timer: PhaseTimer) -> RunReport:
        report.timings = timer.as_dict(self.timings)
        if report.instance is not None:
            report.field_modulus = report.instance.field_table.spec.describe()
        logger.info("%s run %s", report.construction, report.status.value)
        return report

    def _capture(self, report: RunReport, error: CyclotomeError) -> None:
        if isinstance(error, (SizeExceeded, SetupMismatch)):
            report.fail(RunStatus.USAGE, str(error))
            return
        report.fail(RunStatus.FAILED, str(error))
        if isinstance(error, NotTwoValued):
            report.extras["values"] = error.values
        if isinstance(error, GaussMismatch):
            report.extras["gauss"] = error.report

    # commands

    def run_a(
        self,
        p: int,
        p1: int,
        p2: int,
        m: int,
        n: int,
        conditions_only: bool = False,
        force: bool = False,
    ) -> RunReport:
        """
        Check conditions, build the two-prime set and certify its Cayley graph.

        Args:
            p, p1, p2, m, n: Two-prime parameters
            conditions_only: Stop after the arithmetic checks
            force: Materialize even when conditions fail

        Returns:
            RunReport with an SrgCertificate on success
        """
        timer = PhaseTimer()
        with timer.phase("conditions"):
            conditions = check_conditions_A(p, p1, p2, m, n)
        report = self._start("A", conditions, {"p": p, "p1": p1, "p2": p2, "m": m, "n": n})
        if not self._gate(report, conditions, conditions_only, force):
            return self._finish(report, timer)
        params = conditions.params
        try:
            table = self.period_table(params.p, params.f, params.N, timer)
            D = build_D_A(table.setup, params)
            report.instance = Instance(table, D)
            with timer.phase("verify"):
                report.spectrum = [e.to_dict() for e in restricted_spectrum(table, D)]
                report.extras["distinct_values"] = distinct_values(
                    table, D, bound=MAX_DISTINCT_VALUES_A
                )
                certificate = verify_srg(table, D)
            report.certificate = certificate.to_dict()
            if conditions.holds:
                self._cross_check_a(report, params, certificate)
                with timer.phase("case_analysis"):
                    report.extras["case_analysis"] = self._case_agreement_a(table, params, D)
            elif report.extras.get("forced"):
                report.extras["note"] = "conditions fail but the spectrum is two-valued"
            if table.setup.field.q <= self.settings.direct_limit:
                with timer.phase("direct"):
                    direct = verify_srg_direct(table.setup.field, D, self.settings.direct_limit)
                if direct.parameters() != certificate.parameters():
                    raise SpectrumMismatch(
                        f"direct count {direct.parameters()} != spectral {certificate.parameters()}"
                    )
                report.extras["direct"] = direct.to_dict()
        except CyclotomeError as e:
            self._capture(report, e)
        return self._finish(report, timer)

    def _cross_check_a(self, report: RunReport, params: IndexTwoParams, certificate) -> None:
        predicted = predicted_spectrum_A(params)
        report.extras["predicted"] = predicted.to_dict()
        observed = (certificate.k, certificate.lam, certificate.mu, certificate.r, certificate.s)
        expected = (predicted.k, predicted.lam, predicted.mu, predicted.r, predicted.s)
        if observed != expected:
            raise SpectrumMismatch(f"certificate {observed} differs from closed form {expected}")

    def _case_agreement_a(
        self, table: PeriodTable, params: IndexTwoParams, D: ConnectionSet
    ) -> Dict[str, Any]:
        try:
            sign = compare_gauss(table, params, self.settings.gauss_tolerance_scale).sign
        except GaussMismatch as e:
            return {"agrees": False, "error": str(e)}
        values = char_sum_all(table, D.indices)
        labels: Dict[str, int] = {}
        disagreements = []
        for a, value in enumerate(values):
            case = case_analysis_A(table, params, a, c_sign=sign)
            labels[case.case_label] = labels.get(case.case_label, 0) + 1
            if not value.is_rational() or value.rational_value() != case.predicted:
                disagreements.append(a)
        if disagreements:
            logger.warning("case analysis disagrees at shifts %s", disagreements[:10])
        return {
            "agrees": not disagreements,
            "c_sign": sign,
            "cases": labels,
            "shifts": disagreements,
        }

    def run_b(
        self, p: int, p1: int, m: int, conditions_only: bool = False, force: bool = False
    ) -> RunReport:
        """
        Check conditions, build both coset candidates of the one-prime set and verify one.

        The verdict is a skew Hadamard difference set for p = 3 (mod 4) and a
        Paley type partial difference set for p = 1 (mod 4).

        Returns:
            RunReport whose extras name the coset(s) that verified
        """
        timer = PhaseTimer()
        with timer.phase("conditions"):
            conditions = check_conditions_B(p, p1, m)
        report = self._start("B", conditions, {"p": p, "p1": p1, "m": m})
        if not self._gate(report, conditions, conditions_only, force):
            return self._finish(report, timer)
        params = conditions.params
        try:
            table = self.period_table(params.p, params.f, params.N, timer)
            expected = predicted_values_B(params)
            report.extras["predicted_values"] = [v.render() for v in expected]
            outcomes, verified = [], []
            with timer.phase("verify"):
                for coset in (0, 1):
                    D = build_D_B(table.setup, params, coset)
                    spectrum = restricted_spectrum(table, D)
                    outcome = {"coset": coset, "values": [e.value.render() for e in spectrum]}
                    outcome["matches"] = spectrum_matches(spectrum, expected)
                    if outcome["matches"]:
                        try:
                            verdict = self._verify_half_set(table, D)
                            outcome["verified"] = True
                            verified.append((coset, D, verdict, spectrum))
                        except CyclotomeError as e:
                            outcome["verified"] = False
                            outcome["error"] = str(e)
                    outcomes.append(outcome)
            report.extras["cosets"] = outcomes
            if not verified:
                report.instance = Instance(table, build_D_B(table.setup, params, 0))
                raise SpectrumMismatch("neither coset candidate verifies")
            coset, D, verdict, spectrum = verified[0]
            report.instance = Instance(table, D)
            report.extras["selected_coset"] = coset
            report.spectrum = [e.to_dict() for e in spectrum]
            report.certificate = verdict.to_dict()
            with timer.phase("case_analysis"):
                report.extras["case_analysis"] = self._case_agreement_b(table, params, D)
        except CyclotomeError as e:
            self._capture(report, e)
        return self._finish(report, timer)

    def _verify_half_set(self, table: PeriodTable, D: ConnectionSet):
        if table.p % 4 == 3:
            return verify_skew_hds(table, D, census_limit=self.settings.census_limit)
        return verify_paley_pds(table, D)

    def _case_agreement_b(
        self, table: PeriodTable, params: IndexTwoParams, D: ConnectionSet
    ) -> Dict[str, Any]:
        values = char_sum_all(table, D.indices)
        for orientation in (1, -1):
            predictions = [
                case_analysis_B(params, a, orientation).predicted for a in range(table.N)
            ]
            if all(pred.matches(value) for pred, value in zip(predictions, values)):
                return {"agreement": "exact", "orientation": orientation}
            if all(pred.conjugate().matches(value) for pred, value in zip(predictions, values)):
                return {"agreement": "conjugate", "orientation": orientation}
        logger.warning("six-case analysis agrees with no orientation")
        return {"agreement": "none", "orientation": None}

    def run_classes(
        self, p: int, f: int, N: int, indices: Sequence[int], check: str = "srg"
    ) -> RunReport:
        """
        Verify an arbitrary union of cyclotomic classes.

        Args:
            p, f: Field GF(p^f)
            N: Class order, a divisor of p^f - 1
            indices: Class indices of D
            check: "srg", "skew_hds" or "paley_pds"

        Returns:
            RunReport for construction "classes"
        """
        timer = PhaseTimer()
        normalized = sorted({i % N for i in indices}) if N > 0 else []
        report = self._start("classes", None, {"p": p, "f": f, "N": N, "indices": normalized})
        try:
            table = self.period_table(p, f, N, timer)
            D = ConnectionSet(table.setup, tuple(normalized), label="classes")
            report.instance = Instance(table, D)
            with timer.phase("verify"):
                report.spectrum = [e.to_dict() for e in restricted_spectrum(table, D)]
                report.extras["distinct_values"] = distinct_values(table, D)
                if check == "skew_hds":
                    verdict = verify_skew_hds(table, D, self.settings.census_limit)
                    report.certificate = verdict.to_dict()
                elif check == "paley_pds":
                    report.certificate = verify_paley_pds(table, D).to_dict()
                else:
                    report.certificate = verify_srg(table, D).to_dict()
            if check == "srg" and table.setup.field.q <= self.settings.direct_limit:
                with timer.phase("direct"):
                    direct = verify_srg_direct(table.setup.field, D, self.settings.direct_limit)
                report.extras["direct"] = direct.to_dict()
        except CyclotomeError as e:
            self._capture(report, e)
        return self._finish(report, timer)

    def run_gauss(
        self,
        p: int,
        p1: int,
        m: int,
        p2: Optional[int] = None,
        n: Optional[int] = None,
        force: bool = False,
    ) -> RunReport:
        """
        Compare every direct Gauss sum with the closed forms and check the basic identities.

        Two-prime parameters are used when p2 is given, one-prime parameters otherwise.
        """
        timer = PhaseTimer()
        with timer.phase("conditions"):
            if p2 is not None:
                conditions = check_conditions_A(p, p1, p2, m, n or 1)
            else:
                conditions = check_conditions_B(p, p1, m)
        construction = "A" if p2 is not None else "B"
        report = self._start(
            f"gauss-{construction}", conditions, {"p": p, "p1": p1, "p2": p2, "m": m, "n": n}
        )
        if not self._gate(report, conditions, False, force):
            return self._finish(report, timer)
        params = conditions.params
        try:
            table = self.period_table(params.p, params.f, params.N, timer)
            report.instance = Instance(table)
            with timer.phase("gauss"):
                comparison = compare_gauss(table, params, self.settings.gauss_tolerance_scale)
                properties = check_gauss_properties(table, self.settings.gauss_tolerance_scale)
            report.certificate = comparison.to_dict()
            report.extras["properties"] = asdict(properties)
            if not (comparison.valid and properties.valid):
                report.fail(RunStatus.FAILED, "Gauss sum identities fail")
        except CyclotomeError as e:
            self._capture(report, e)
        return self._finish(report, timer)

    def run_scheme(
        self, p: int, p1: int, p2: int, m: int, n: int, force: bool = False
    ) -> RunReport:
        """Build the shifted two-prime relations and check the association scheme they form."""
        timer = PhaseTimer()
        with timer.phase("conditions"):
            conditions = check_conditions_A(p, p1, p2, m, n)
        report = self._start("scheme", conditions, {"p": p, "p1": p1, "p2": p2, "m": m, "n": n})
        if not self._gate(report, conditions, False, force):
            return self._finish(report, timer)
        params = conditions.params
        try:
            table = self.period_table(params.p, params.f, params.N, timer)
            relations = build_scheme_relations(table.setup, params)
            report.instance = Instance(table, relations=relations)
            with timer.phase("scheme"):
                scheme = verify_scheme(table, relations, direct_limit=self.settings.direct_limit)
            report.certificate = scheme.to_dict()
        except CyclotomeError as e:
            self._capture(report, e)
        return self._finish(report, timer)

    def export(self, report: RunReport, fmt: GraphFormat, header: bool = False) -> bytes:
        """
        Encode the instance behind a report.

        Raises:
            CyclotomeError: If the report has no materialized connection set
            TooLargeForFormat: For graph6 beyond 2^16 vertices
        """
        instance = report.instance
        if instance is None or (instance.D is None and fmt is not GraphFormat.PERIODS):
            raise CyclotomeError(f"nothing to export: {report.error or 'no instance'}")
        codec = GraphCodec(header=header)
        return codec.encode(
            fmt,
            instance.field_table,
            instance.D,
            report=report.to_dict(),
            table=instance.table,
        )

    def scan(self, kind: ConstructionKind, bound: int, m: int = 1, n: int = 1) -> List[ScanRow]:
        scanner = ParameterScanner(threads=self.settings.threads)
        if kind is ConstructionKind.TWO_PRIMES:
            return scanner.scan_a(bound, m, n)
        return scanner.scan_b(bound, m)

    def tables(self) -> List[Dict[str, Any]]:
        return table_rows()
