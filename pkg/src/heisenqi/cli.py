"""Command-line drivers. Every command prints one JSON report document.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
3 circuit parse error, 4 unreadable file or malformed matrix, 5 input is not
a valid state (or otherwise violates a numerical precondition).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from . import descriptors as dh
from . import entanglement as ent
from . import measures as ms
from . import mub
from . import protocols as pr
from .descriptors import Gate
from .matrix_io import MatrixFormatError, load_matrix, matrix_to_doc
from .operators import POSITIVITY_TOL, OperatorError, check_density

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PARSE, EXIT_IO, EXIT_STATE = range(6)

DEFAULT_TOL = 1e-10


class CircuitParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class UsageError(ValueError):
    pass


# -- circuit files -----------------------------------------------------------

@dataclass(frozen=True)
class CircuitFile:
    n: int
    gates: tuple[Gate, ...]


_ANGLE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:e[+-]?\d+)?)?\*?(pi)?(?:/(\d+(?:\.\d*)?))?$", re.I)


def parse_angle(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/4``, ``-pi``, ``3pi/4``, ``0.5*pi``."""
    t = text.strip().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    sign = 1.0
    if t[:1] in "+-" and t[1:2].lower() == "p":
        sign, t = (-1.0 if t[0] == "-" else 1.0), t[1:]
    m = _ANGLE.match(t)
    if not m or not m.group(2):
        raise ValueError(f"cannot read angle {text!r}")
    coef = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(3)) if m.group(3) else 1.0
    if den == 0:
        raise ValueError("division by zero in angle")
    return sign * coef * math.pi / den


def parse_circuit(text: str) -> CircuitFile:
    """Grammar: a ``qubits N`` line, then one ``GATE q [q2] [name=value]`` per line.

    ``#`` starts a comment. Gate names are case-insensitive. Custom
    unitaries are not expressible in this format.
    """
    n = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].upper()
        if head == "QUBITS":
            if n is not None:
                raise CircuitParseError(lineno, "qubit count declared twice")
            if len(tok) != 2 or not tok[1].isdigit() or int(tok[1]) < 1:
                raise CircuitParseError(lineno, "expected 'qubits N' with N >= 1")
            n = int(tok[1])
            continue
        if n is None:
            raise CircuitParseError(lineno, "gate before 'qubits N' declaration")
        if head not in dh.GATE_KINDS or head == "U":
            raise CircuitParseError(lineno, f"unknown gate {tok[0]!r}")
        qubits, params = [], {}
        for t in tok[1:]:
            if "=" in t:
                name, _, val = t.partition("=")
                name = name.lower()
                if name not in ("theta", "angle") or name in params:
                    raise CircuitParseError(lineno, f"unexpected parameter {name!r}")
                try:
                    params["theta"] = parse_angle(val)
                except ValueError as exc:
                    raise CircuitParseError(lineno, str(exc)) from None
            elif params:
                raise CircuitParseError(lineno, "qubit index after a parameter")
            else:
                if not re.fullmatch(r"\d+", t):
                    raise CircuitParseError(lineno, f"bad qubit index {t!r}")
                q = int(t)
                if not 1 <= q <= n:
                    raise CircuitParseError(lineno, f"qubit {q} out of range 1..{n}")
                qubits.append(q)
        if head in dh.ROTATIONS and "theta" not in params:
            raise CircuitParseError(lineno, f"{head} needs theta=<angle>")
        if head not in dh.ROTATIONS and params:
            raise CircuitParseError(lineno, f"{head} takes no parameters")
        try:
            gates.append(Gate(head, tuple(qubits), params.get("theta")))
        except OperatorError as exc:
            raise CircuitParseError(lineno, str(exc)) from None
    if n is None:
        raise CircuitParseError(max(1, len(text.splitlines())), "missing 'qubits N' declaration")
    return CircuitFile(n, tuple(gates))


# -- reports -------------------------------------------------------------------

@dataclass
class Report:
    command: list[str]
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)  # name -> bool
    table: list[dict] | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_doc(self) -> dict:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks,
            "ok": self.ok,
            "version": __version__,
        }
        if self.table is not None:
            doc["table"] = self.table
        return _jsonable(doc)

    def render(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, indent=2) + "\n"

    def render_csv(self) -> str:
        rows = self.table or []
        buf = io.StringIO()
        if rows:
            cols = sorted({k for r in rows for k in r})
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _jsonable(r.get(k)) for k in cols})
        return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        if v.ndim == 2 and v.shape[0] == v.shape[1] and np.iscomplexobj(v):
            return matrix_to_doc(v)
        return _jsonable(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if not math.isfinite(f):
            return str(f)
        return 0.0 if f == 0 else f
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, ent.Status):
        return v.value
    return v


def _verdict_doc(v: ent.Verdict) -> dict:
    return {"status": v.status.value, "criterion": v.criterion, "witness_value": v.witness_value}


def _record_checks(rep: Report, protocol: pr.ProtocolReport, prefix: str = "") -> None:
    s = protocol.summary()
    rep.results[prefix or protocol.name] = s["quantities"] | {"checks": s["checks"]}
    for k in s["checks"]:
        rep.checks[f"{prefix or protocol.name}:{k}"] = s["checks"][k]["passed"]


def _load_state(path: str, tol: float) -> np.ndarray:
    m = _load(path)
    return check_density(m, tol)


def _load(path: str) -> np.ndarray:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(path)
    return load_matrix(p)


def _parse_dims(s: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", s.lower())
    if not m:
        raise UsageError(f"dims must look like 2x2, got {s!r}")
    return int(m.group(1)), int(m.group(2))


def _floats(values: Sequence[str]) -> list[float]:
    try:
        return [float(x) for x in values]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ----------------------------------------------------------------

def cmd_simulate(args, rep: Report) -> None:
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    try:
        text = Path(args.circuit).read_text()
    except OSError as exc:
        raise FileNotFoundError(str(exc)) from None
    cf = parse_circuit(text)
    init = dh.ALL_ZERO if args.initial == dh.ALL_ZERO else _load_state(args.initial, POSITIVITY_TOL)
    rep.inputs.update({"circuit": args.circuit, "initial": args.initial, "tol": tol, "qubits": cf.n})
    net = dh.run_circuit(cf.n, cf.gates)
    rho = dh.reconstruct_density(net, init)
    ref = dh.schrodinger_reference(cf.gates, init, cf.n)
    resid = pr.hs_dist(rho, ref)
    rep.results["gates"] = len(cf.gates)
    rep.results["density"] = rho
    rep.results["dual_path_residual"] = resid
    rep.results["algebra_residual"] = max(net.descriptor(i).algebra_residual() for i in range(1, cf.n + 1))
    if args.reduce:
        try:
            subset = sorted({int(x) for x in args.reduce.split(",")})
        except ValueError:
            raise UsageError(f"--reduce expects comma-separated qubit indices, got {args.reduce!r}") from None
        if any(not 1 <= q <= cf.n for q in subset):
            raise UsageError(f"--reduce indices must lie in 1..{cf.n}")
        rep.results["reduced"] = {"qubits": subset, "density": dh.reduced_density(net, init, subset)}
    rep.checks["dual_path"] = resid <= tol


def cmd_entangle(args, rep: Report) -> None:
    tol = args.tol if args.tol is not None else POSITIVITY_TOL
    rho = _load_state(args.matrix, tol)
    dims = _parse_dims(args.dims) if args.dims else (2, 2)
    if dims[0] * dims[1] != rho.shape[0]:
        raise UsageError(f"dims {dims} do not match matrix dimension {rho.shape[0]}")
    rep.inputs.update({"matrix": args.matrix, "dims": f"{dims[0]}x{dims[1]}", "criteria": args.criteria, "tol": tol})
    wanted = {"ppt", "reduction", "majorization", "geometric", "tetra"} if args.criteria == "all" else {args.criteria}
    out = {}
    qubits = dims == (2, 2)
    if "ppt" in wanted:
        out["ppt"] = _verdict_doc(ent.ppt_verdict(rho, dims, tol))
    if "reduction" in wanted:
        if dims in ent.CONCLUSIVE_PPT_DIMS:
            out["reduction"] = _verdict_doc(ent.reduction_verdict(rho, dims, tol))
        elif args.criteria == "reduction":
            raise UsageError("reduction criterion needs 2x2 or 2x3")
    if "majorization" in wanted:
        out["majorization"] = _verdict_doc(ent.majorization_verdict(rho, dims, tol))
    if qubits and wanted & {"geometric", "tetra"}:
        f = ent.two_qubit_form(rho)
        if "geometric" in wanted:
            g = ent.geometric_report(f, tol)
            out["geometric"] = _verdict_doc(g.verdict) | {"sum_c2": g.sum_c2, "a2": g.a2, "b2": g.b2,
                                                           "thresholds": g.thresholds}
            w = ent.witness_from_pt(rho, samples=500, seed=args.seed, tol=tol)
            if w is not None:
                out["witness"] = {"expectation": w.expectation, "predicted": w.predicted,
                                  "min_sampled_separable": w.min_separable_expectation,
                                  "separable_check": w.separable_check}
        if "tetra" in wanted:
            if ent.is_bell_diagonal(f):
                c = np.diag(f.C)
                t = ent.tetra_membership(c, tol)
                out["tetra"] = {"c": c, "in_tetrahedron": t.in_tetrahedron, "in_octohedron": t.in_octohedron,
                                "status": (ent.Status.SEPARABLE if t.in_octohedron else ent.Status.ENTANGLED).value}
            elif args.criteria == "tetra":
                out["tetra"] = {"status": ent.Status.UNDETERMINED.value, "note": "state is not Bell-diagonal"}
    elif wanted <= {"geometric", "tetra"}:
        raise UsageError("geometric and tetra criteria need a 2x2 state")
    rep.results["verdicts"] = out
    statuses = {v["status"] for v in out.values() if "status" in v}
    # a conclusive criterion never contradicts another one
    rep.checks["consistent"] = not ({"Separable", "Entangled"} <= statuses)


def cmd_measures(args, rep: Report) -> None:
    kind = args.kind
    rep.inputs.update({"kind": kind, "args": list(args.values)})
    v = list(args.values)
    if kind == "shannon":
        rep.results["bits"] = ms.shannon_entropy(_floats(v))
    elif kind == "mutual":
        j = _joint(v)
        rep.results.update({
            "mutual_information": ms.mutual_information(j),
            "H(X)": ms.shannon_entropy(j.sum(axis=1)),
            "H(Y)": ms.shannon_entropy(j.sum(axis=0)),
            "H(X,Y)": ms.joint_entropy(j),
            "H(X|Y)": ms.conditional_entropy(j),
        })
    elif kind == "holevo":
        states, probs = [], []
        for item in v:
            p, sep, path = item.partition(":")
            if not sep:
                raise UsageError("holevo arguments look like <prob>:<matrix.json>")
            probs.extend(_floats([p]))
            states.append(_load_state(path, POSITIVITY_TOL))
        e = ms.Ensemble(tuple(states), np.array(probs))
        rep.results.update({"chi": ms.holevo_chi(e), "average_entropy": ms.von_neumann_entropy(e.average()),
                            "states_commute": ms.states_commute(e)})
    elif kind == "grouping":
        if not args.merge:
            raise UsageError("grouping needs --merge i,k (0-based)")
        try:
            i, k = (int(x) for x in args.merge.split(","))
        except ValueError:
            raise UsageError("--merge expects two comma-separated indices") from None
        p = _floats(v)
        measure = None if args.measure == "shannon" else mub.bz_measure
        rep.results.update({"residual": ms.grouping_residual(p, (i, k), measure), "measure": args.measure})
        if args.measure == "shannon":
            rep.checks["grouping"] = rep.results["residual"] <= (args.tol if args.tol is not None else 1e-12)
    elif kind == "dretske":
        if args.event is None or not args.conditional:
            raise UsageError("dretske needs --event i and --conditional q1 q2 ...")
        px = _floats(v)
        rep.results["bits"] = ms.dretske_measure(px, _floats(args.conditional), args.event)
    elif kind == "vn":
        if len(v) != 1:
            raise UsageError("vn takes one matrix file")
        rho = _load_state(v[0], POSITIVITY_TOL)
        rep.results.update({"bits": ms.von_neumann_entropy(rho), "spectrum": ms.spectrum(rho)})


def _joint(v: Sequence[str]) -> np.ndarray:
    """Rows separated by ';' and entries by ',' (one argument), or one row per argument."""
    text = ";".join(v)
    try:
        rows = [[float(x) for x in r.split(",") if x.strip()] for r in text.split(";") if r.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise UsageError("joint table rows must have equal length")
    return np.array(rows)


def cmd_protocol(args, rep: Report) -> None:
    name = args.name
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    rep.inputs.update({"protocol": name, "tol": tol})
    if name == "teleport":
        theta = parse_angle(args.theta) if args.theta is not None else 0.7
        phi = parse_angle(args.phi) if args.phi is not None else 0.0
        rep.inputs.update({"theta": theta, "phi": phi})
        _record_checks(rep, pr.teleport_run(theta, phi, tol))
    elif name == "densecode":
        msgs = [args.bits] if args.bits else ["00", "01", "10", "11"]
        for m in msgs:
            if not re.fullmatch(r"[01]{2}", m):
                raise UsageError(f"--bits expects two binary digits, got {m!r}")
            _record_checks(rep, pr.dense_code_run((int(m[0]), int(m[1])), tol), prefix=f"densecode_{m}")
        rep.inputs["messages"] = msgs
    elif name == "swap":
        _record_checks(rep, pr.entanglement_swap_run(max(tol, 1e-9)))
    elif name == "bell":
        if args.theta is not None or args.phi is not None:
            theta = parse_angle(args.theta or "0")
            phi = parse_angle(args.phi or "0")
            steps = args.steps or 1
            rows = []
            for k in range(steps):
                ph = phi + (2 * math.pi * k / steps if steps > 1 else 0.0)
                r = pr.bell_experiment_run(theta, ph)
                rows.append({"theta": theta, "phi": ph, "E": r.E, "predicted": math.cos(theta - ph),
                             "bob_p0": float(r.marginal_bob[0]), "alice_p0": float(r.marginal_alice[0])})
            rep.inputs.update({"theta": theta, "phi": phi, "steps": steps})
            rep.table = rows
            rep.results["max_deviation_from_cos"] = max(abs(r["E"] - r["predicted"]) for r in rows)
            rep.checks["correlation_matches_cos"] = rep.results["max_deviation_from_cos"] <= tol
        else:
            s = pr.chsh_value()
            rep.inputs["angles"] = pr.CHSH_ANGLES
            rep.results.update({"S": s, "tsirelson": 2 * math.sqrt(2)})
            rep.checks["tsirelson"] = abs(abs(s) - 2 * math.sqrt(2)) <= max(tol, 1e-9)
            rep.checks["exceeds_local_bound"] = abs(s) > 2
    elif name == "bccheat":
        pairs = [(args.committed, args.revealed)] if args.committed is not None and args.revealed is not None else [
            (c, r) for c in (0, 1) for r in (0, 1)]
        for c, r in pairs:
            _record_checks(rep, pr.bc_epr_cheat_run(c, r, tol), prefix=f"bccheat_c{c}_r{r}")
    elif name == "schumacher":
        p = args.p if args.p is not None else 0.9
        if not 0 <= p <= 1:
            raise UsageError("--p must lie in [0, 1]")
        try:
            blocks = [int(x) for x in (args.blocks or "5,10,20,50").split(",")]
        except ValueError:
            raise UsageError("--blocks expects comma-separated integers") from None
        eps = args.epsilon if args.epsilon is not None else 0.1
        rho = np.diag([p, 1 - p]).astype(complex)
        rows = []
        for s in pr.schumacher_trend(rho, blocks, eps):
            rows.append({"N": s.N, "S": s.S, "epsilon": s.epsilon, "typical_dimension": s.typical_dimension,
                         "typical_weight": s.typical_weight, "rate": s.rate})
        rep.inputs.update({"p": p, "blocks": blocks, "epsilon": eps})
        rep.table = rows
        rep.results["S"] = rows[0]["S"] if rows else ms.shannon_entropy([p, 1 - p])
    else:
        raise UsageError(f"unknown protocol {name!r}")


def cmd_mub(args, rep: Report) -> None:
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    rho = _load_state(args.matrix, POSITIVITY_TOL)
    d = rho.shape[0]
    rep.inputs.update({"sub": args.sub, "matrix": args.matrix, "tol": tol})
    if args.sub == "itot":
        rep.results["itot"] = mub.itot(rho)
        return
    m = mub.mub_bases(d)
    stats = mub.mub_statistics(rho, m)
    if args.sub == "identity":
        total = mub.bz_sum(stats)
        rep.results.update({"bz_sum": total, "itot": mub.itot(rho), "shannon_sum": mub.shannon_sum(stats),
                            "statistics": stats.table})
        rep.results["difference"] = abs(total - rep.results["itot"])
        rep.checks["identity"] = rep.results["difference"] <= tol
    else:
        rec = mub.reconstruct_from_mub(stats, m)
        err = pr.hs_dist(rec, rho)
        rep.results.update({"reconstructed": rec, "round_trip_error": err, "statistics": stats.table})
        rep.checks["round_trip"] = err <= max(tol, 1e-9)


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    common.add_argument("--tol", type=float, default=None, help="check tolerance (command-specific default)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--csv", action="store_true", help="emit the tabular part of the report as CSV")

    p = _Parser(prog="heisenqi", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", parents=[common], help="run a circuit file through both pictures")
    s.add_argument("circuit")
    s.add_argument("--initial", default=dh.ALL_ZERO, help="'all-zero' or a matrix file")
    s.add_argument("--reduce", default=None, help="comma-separated qubits to keep")

    e = sub.add_parser("entangle", parents=[common], help="separability verdicts for a matrix file")
    e.add_argument("matrix")
    e.add_argument("--dims", default=None, help="2x2 (default) or 2x3, 3x2")
    e.add_argument("--criteria", default="all", choices=["all", "ppt", "reduction", "majorization", "geometric", "tetra"])

    m = sub.add_parser("measures", parents=[common], help="classical and quantum information measures")
    m.add_argument("kind", choices=["shannon", "mutual", "holevo", "grouping", "dretske", "vn"])
    m.add_argument("values", nargs="*")
    m.add_argument("--merge", default=None)
    m.add_argument("--measure", default="shannon", choices=["shannon", "bz"])
    m.add_argument("--event", type=int, default=None)
    m.add_argument("--conditional", nargs="+", default=None)

    q = sub.add_parser("protocol", parents=[common], help="run a protocol circuit")
    q.add_argument("name", choices=["teleport", "densecode", "swap", "bell", "bccheat", "schumacher"])
    q.add_argument("--theta", default=None)
    q.add_argument("--phi", default=None)
    q.add_argument("--steps", type=int, default=None)
    q.add_argument("--bits", default=None)
    q.add_argument("--committed", type=int, choices=[0, 1], default=None)
    q.add_argument("--revealed", type=int, choices=[0, 1], default=None)
    q.add_argument("--p", type=float, default=None)
    q.add_argument("--blocks", default=None)
    q.add_argument("--epsilon", type=float, default=None)

    u = sub.add_parser("mub", parents=[common], help="mutually unbiased basis tools")
    u.add_argument("sub", choices=["itot", "identity", "reconstruct"])
    u.add_argument("matrix")
    return p


COMMANDS = {"simulate": cmd_simulate, "entangle": cmd_entangle, "measures": cmd_measures,
            "protocol": cmd_protocol, "mub": cmd_mub}


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute a command; returns (exit code, output text)."""
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_USAGE, f"usage error: {exc}\n"
    except SystemExit as exc:  # --help
        return int(exc.code or 0), ""
    rep = Report(command=argv, inputs={"seed": args.seed})
    try:
        COMMANDS[args.cmd](args, rep)
    except UsageError as exc:
        return EXIT_USAGE, f"usage error: {exc}\n"
    except CircuitParseError as exc:
        return EXIT_PARSE, f"circuit error: {exc}\n"
    except (FileNotFoundError, MatrixFormatError) as exc:
        return EXIT_IO, f"input error: {exc}\n"
    except (OperatorError, ms.DistributionError) as exc:
        return EXIT_STATE, f"invalid input: {exc}\n"
    text = rep.render_csv() if args.csv else rep.render()
    if args.out:
        Path(args.out).write_text(text)
        text = ""
    return (EXIT_OK if rep.ok else EXIT_CHECK), text


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_CHECK) else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
