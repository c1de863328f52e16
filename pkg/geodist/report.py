"""Result records shared by every estimator

An `EstimateReport` is what every exact, limiting or Monte Carlo computation hands back to the
command-line layer; a `TableReport` carries row-oriented outputs (identity trials, sweeps,
histograms).
"""

from typing import Any, Dict, List, Optional, Sequence

from dataclasses import asdict, dataclass, field

REALNESS_THRESHOLD = 1e-4


@dataclass
class TermRecord:
    """Contribution of a single (k1, k2) series term

    Parameters
    ----------
    k1 : `int`
        Number of U1/V1 variables

    k2 : `int`
        Number of U2/V2 variables

    value : `complex`
        Term value after the z-integration and the 1/(k1! k2!)^2 factor

    peak : `float`
        Largest integrand magnitude met while integrating the term

    evaluations : `int`
        Number of integrand evaluations
    """

    k1: int
    k2: int
    value: complex
    peak: float = 0.0
    evaluations: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "value_re": float(self.value.real),
            "value_im": float(self.value.imag),
            "peak": float(self.peak),
            "evaluations": int(self.evaluations),
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "TermRecord":
        return cls(
            k1=int(d["k1"]),
            k2=int(d["k2"]),
            value=complex(d["value_re"], d["value_im"]),
            peak=float(d.get("peak", 0.0)),
            evaluations=int(d.get("evaluations", 0)),
        )


@dataclass
class EstimateReport:
    """Value of a computed quantity with the evidence that supports it

    Parameters
    ----------
    quantity : `str`
        Name of the computed quantity (e.g. `finite-density`)

    value : `complex`
        Estimated value. Exact formulas keep the imaginary residue of the quadrature

    terms : `list`
        Per-term records of series expansions, empty otherwise

    stderr : `float`
        Standard error of Monte Carlo estimates

    seed : `int`
        Seed of Monte Carlo estimates

    runtime_ms : `float`
        Wall-clock time, reported only when timing is requested

    error_estimate : `float`
        Truncation evidence: magnitude of the highest-order term

    config : `dict`
        Effective configuration that produced the value

    diagnostic : `str`
        Name of a failed sanity check (e.g. `imag_residue`)
    """

    quantity: str
    value: complex
    terms: List[TermRecord] = field(default_factory=list)
    stderr: Optional[float] = None
    seed: Optional[int] = None
    runtime_ms: Optional[float] = None
    error_estimate: Optional[float] = None
    config: Dict[str, Any] = field(default_factory=dict)
    diagnostic: Optional[str] = None

    @property
    def imag_residue(self) -> float:
        return abs(complex(self.value).imag)

    def check_realness(self, threshold: float = REALNESS_THRESHOLD) -> bool:
        """Flag a value whose imaginary part exceeds `threshold` times its modulus

        Returns
        -------
        is_real : `bool`
            False when the `imag_residue` diagnostic was set
        """
        if self.imag_residue > threshold * abs(complex(self.value)):
            self.diagnostic = "imag_residue"
            return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        value = complex(self.value)
        return {
            "quantity": self.quantity,
            "value_re": float(value.real),
            "value_im": float(value.imag),
            "stderr": self.stderr,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "error_estimate": self.error_estimate,
            "config": self.config,
            "diagnostic": self.diagnostic,
            "terms": [term.to_dict() for term in self.terms],
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "EstimateReport":
        return cls(
            quantity=d["quantity"],
            value=complex(d["value_re"], d.get("value_im", 0.0)),
            terms=[TermRecord.from_dict(t) for t in d.get("terms", [])],
            stderr=d.get("stderr"),
            seed=d.get("seed"),
            runtime_ms=d.get("runtime_ms"),
            error_estimate=d.get("error_estimate"),
            config=dict(d.get("config", {})),
            diagnostic=d.get("diagnostic"),
        )


@dataclass
class TableReport:
    """Row-oriented output, one dictionary per row sharing the same `columns`"""

    quantity: str
    columns: Sequence[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    runtime_ms: Optional[float] = None
    diagnostic: Optional[str] = None

    def append(self, row: Dict[str, Any]) -> None:
        self.rows.append({name: row.get(name) for name in self.columns})

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["columns"] = list(self.columns)
        return d
