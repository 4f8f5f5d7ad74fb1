"""Built-in fixtures and the counterexample hunt.

Every fixture carries its expected outcome; :func:`corpus_run` recomputes it
and reports pass/fail per expectation. Nothing on a fixture path draws
unseeded randomness.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT
from .errors import InternalInconsistency, SearchExhausted, UnknownInstance, ValidationError
from .linalg import eigen_general
from .pencil import Kind, PencilProblem, exceptional_set, generic_kernel_dimension, kernel_witness
from .persistence import (
    CANONICAL_H0,
    CANONICAL_SEED,
    CANONICAL_V,
    PerturbationFamily,
    analyze,
    construct_persistent_family,
)
from .serialize import matrix_from_obj, matrix_to_obj

ROOT_TOL = 1e-9
TRUNCATIONS = (4, 8, 16)


@dataclass(frozen=True, eq=False)
class CorpusInstance:
    id: str
    provenance: str
    description: str
    family: PerturbationFamily = None
    pencil: PencilProblem = None
    lambda0: float = None
    expected: dict = field(default_factory=dict)


@dataclass
class CorpusResult:
    id: str
    passed: bool
    checks: list
    report: object = None
    exceptional: object = None
    extra: dict = field(default_factory=dict)


def shift(n):
    """Truncated unilateral shift: ones on the first subdiagonal."""
    return np.diag(np.ones(n - 1), -1)


def truncated_shift_pair(n):
    """``H0 = [[0, S], [S^*, 0]]`` and ``V = [[0, I], [I, 0]]`` on C^{2n}."""
    s = shift(n)
    z = np.zeros((n, n))
    eye = np.eye(n)
    return np.block([[z, s], [s.T, z]]), np.block([[z, eye], [eye, z]])


def _build():
    items = []
    items.append(CorpusInstance(
        "example-2.6", "Example 2.6",
        "Self-adjoint 2x2 pencil diag(1,-1) f = t [[0,1],[1,0]] f whose eigenvalues are +-i.",
        pencil=PencilProblem(np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]])),
        expected={"kind": Kind.FINITE, "roots": [(1j, 1), (-1j, 1)]},
    ))
    items.append(CorpusInstance(
        "example-2.9", "Example 2.9",
        "3x3 counterexample: V indefinite, ran(V) cyclic, and 0 is an eigenvalue of H0 + tV "
        "for every complex t with eigenvector (1, -1, -t).",
        family=PerturbationFamily(CANONICAL_H0, CANONICAL_V), lambda0=0.0,
        expected={"kind": Kind.ALL_COMPLEX, "cyclic": True, "indefinite": True, "kernel_dim": 1,
                  "witness_t": 2.0, "witness": np.array([1.0, -1.0, -2.0])},
    ))
    phi = np.diag([1.0, 0.0])
    items.append(CorpusInstance(
        "intro-rank-one", "Introduction, rank-one example",
        "H0 = V = projector onto e1 in C^2: 0 is always an eigenvalue because ran(V) is too "
        "small to be cyclic.",
        family=PerturbationFamily(phi, phi), lambda0=0.0,
        expected={"kind": Kind.ALL_COMPLEX, "cyclic": False},
    ))
    for n in TRUNCATIONS:
        h0, v = truncated_shift_pair(n)
        items.append(CorpusInstance(
            f"example-2.7-truncated-{n}", "Example 2.7, finite section",
            f"Finite section (N={n}) of H0 f = t V f with H0 = [[0, S], [S^*, 0]] and "
            "V = [[0, I], [I, 0]], S the shift with ones on the first subdiagonal. Here "
            "V H0 = diag(S^*, S) is nilpotent, so t = 0 is the only eigenvalue, with "
            f"multiplicity {2 * n}. For the true shift on l^2 the point spectrum of V H0 is "
            "the whole open unit disk; that continuum is an infinite-dimensional effect no "
            "finite section can show.",
            pencil=PencilProblem(h0, v),
            expected={"kind": Kind.FINITE, "roots": [(0j, 2 * n)], "vh0_max_modulus": 1e-6},
        ))
    # det(H0 + tV) = -6t^3 - 4t by cofactor expansion: t = 0, +-i sqrt(2/3)
    r = np.sqrt(2.0 / 3.0)
    items.append(CorpusInstance(
        "remark-2.10-invertible", "Remark 2.10",
        "Invertible V = diag(1, -2, 3) with H0 the 3-vertex path adjacency and lambda0 = 0: "
        "the exceptional set is finite with total multiplicity 3.",
        family=PerturbationFamily(np.array([[0.0, 1, 0], [1, 0, 1], [0, 1, 0]]), np.diag([1.0, -2.0, 3.0])),
        lambda0=0.0,
        expected={"kind": Kind.FINITE, "roots": [(0j, 1), (1j * r, 1), (-1j * r, 1)]},
    ))
    items.append(CorpusInstance(
        "diagonal-identity-v", "Diagonal sanity fixture",
        "H0 = diag(0, 1, 2), V = I, lambda0 = 0: eigenvalues d_k + t vanish at t = 0, -1, -2.",
        family=PerturbationFamily(np.diag([0.0, 1.0, 2.0]), np.eye(3)), lambda0=0.0,
        expected={"kind": Kind.FINITE, "roots": [(0j, 1), (-1 + 0j, 1), (-2 + 0j, 1)],
                  "real_unit": [0j]},
    ))
    return {it.id: it for it in items}


_CORPUS = _build()


def corpus_list():
    """``[(id, provenance), ...]`` in a fixed order."""
    return [(k, v.provenance) for k, v in _CORPUS.items()]


def get_instance(id):
    try:
        return _CORPUS[id]
    except KeyError:
        raise UnknownInstance(f"unknown corpus instance {id!r}") from None


def _roots_match(expected, ex, tol=ROOT_TOL):
    got = list(ex.roots)
    if len(got) != len(expected):
        return False
    for t, m in expected:
        hits = [(s, k) for s, k in got if abs(s - t) <= tol and k == m]
        if not hits:
            return False
        got.remove(hits[0])
    return True


def corpus_run(id, cfg=DEFAULT, seed=0):
    inst = get_instance(id)
    exp = inst.expected
    checks = []
    extra = {}
    report = None
    if inst.family is not None:
        report = analyze(inst.family, inst.lambda0, cfg, seed=seed)
        ex = report.exceptional
        pencil = PencilProblem(inst.lambda0 * np.eye(inst.family.n) - inst.family.H0, inst.family.V)
    else:
        pencil = inst.pencil
        ex = exceptional_set(pencil, cfg)
        extra["generic_kernel_dimension"] = generic_kernel_dimension(pencil, cfg, seed=seed)

    checks.append(("kind", exp["kind"].value, ex.kind.value, ex.kind is exp["kind"]))
    if "roots" in exp:
        checks.append(("roots", str(exp["roots"]), str(list(ex.roots)), _roots_match(exp["roots"], ex)))
    if "real_unit" in exp:
        got = [t for t, _ in ex.real_roots_in_unit_interval]
        ok = len(got) == len(exp["real_unit"]) and all(
            min(abs(g - e) for g in got) <= ROOT_TOL for e in exp["real_unit"])
        checks.append(("real_roots_in_unit_interval", str(exp["real_unit"]), str(got), ok))
    if "cyclic" in exp:
        checks.append(("cyclic", exp["cyclic"], report.cyclicity.cyclic, report.cyclicity.cyclic == exp["cyclic"]))
    if "indefinite" in exp:
        got = report.v_class.indefinite
        checks.append(("indefinite", exp["indefinite"], got, got == exp["indefinite"]))
    if "kernel_dim" in exp:
        got = report.v_class.kernel_dim
        checks.append(("kernel_dim", exp["kernel_dim"], got, got == exp["kernel_dim"]))
    if "witness" in exp:
        basis = kernel_witness(pencil, exp["witness_t"], cfg)
        w = exp["witness"] / np.linalg.norm(exp["witness"])
        if basis.shape[1] == 1:
            b = basis[:, 0]
            b = b * (np.vdot(b, w) / abs(np.vdot(b, w)))
            err = float(np.linalg.norm(b - w))
        else:
            err = np.inf
        extra["witness_error"] = err
        checks.append(("witness", "proportional within 1e-08", f"{err:.2e}", err <= 1e-8))
    if "vh0_max_modulus" in exp:
        vals = eigen_general(pencil.B @ pencil.A, cfg).values
        m = float(np.max(np.abs(vals)))
        extra["vh0_eigenvalues"] = vals
        checks.append(("vh0_max_modulus", f"<= {exp['vh0_max_modulus']:g}", f"{m:.2e}",
                       m <= exp["vh0_max_modulus"] and len(vals) == pencil.n))
    return CorpusResult(id, all(c[3] for c in checks), checks, report, ex, extra)


@dataclass
class HuntResult:
    n: int
    trials: int
    seed: int
    families: list
    successes: int

    @property
    def success_rate(self):
        return self.successes / self.trials if self.trials else 0.0

    def to_obj(self):
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "families": self.families,
        }


def trial_seed(seed, n, i):
    if n == 3 and seed == CANONICAL_SEED and i == 0:
        return CANONICAL_SEED
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def _reverify(h0_obj, v_obj, cfg):
    fam = PerturbationFamily(matrix_from_obj(h0_obj), matrix_from_obj(v_obj))
    rep = analyze(fam, 0.0, cfg)
    return rep.exceptional.kind is Kind.ALL_COMPLEX and rep.cyclicity.cyclic and rep.v_class.indefinite


def hunt(n, trials, seed=0, cfg=DEFAULT, retries=100):
    """Search for cyclic, indefinite families with a persistent eigenvalue.

    Each trial gets its own seed; each emitted family is serialized, parsed
    back and re-verified by a fresh :func:`analyze` run.
    """
    if n < 3:
        raise ValidationError("hunt needs dimension n >= 3")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    families = []
    for i in range(trials):
        s = trial_seed(seed, n, i)
        try:
            fam, wit = construct_persistent_family(n, s, cfg, retries=retries)
        except SearchExhausted:
            continue
        h0_obj, v_obj = matrix_to_obj(fam.H0), matrix_to_obj(fam.V)
        if not _reverify(h0_obj, v_obj, cfg):
            raise InternalInconsistency(f"trial {i}: constructed family failed re-verification")
        families.append({
            "trial": i,
            "seed": s,
            "h0": h0_obj,
            "v": v_obj,
            "u0": [[float(z.real), float(z.imag)] for z in wit.u0.astype(complex)],
            "u1": [[float(z.real), float(z.imag)] for z in wit.u1.astype(complex)],
            "residuals": list(wit.residuals),
        })
    if not families:
        raise SearchExhausted(f"no verified family in {trials} trials")
    return HuntResult(n, trials, seed, families, len(families))
