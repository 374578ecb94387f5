"""Command-line front end: krfermion {qsys,mult,char,sce,verify}.

Exit codes: 0 success, 2 an identity check failed, 3 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from math import factorial, prod

from .cartan import AlgebraId, InvalidAlgebra, build_cartan, weyl_orbit
from .characters import (classical_kr_character, decompose_into_irreducibles,
                         dominant_weights_below, irreducible_character, kr_tensor_character)
from .fermionic import (ModeMap, fermionic_qtable, highest_weight, r_number, r_series,
                        weight_multiplicity_k, weight_multiplicity_r, weyl_invariance_report)
from .genseries import (convergence_sanity, verify_binomial_expansion, verify_k0_identities,
                        verify_generating_identities, verify_zv_jacobian)
from .qsystem import check_convergence, check_qsystem, level_truncation, verify_b_identities
from .sce import (DEFAULT_MAX_DET, SingularSCE, build_sce, check_genericity,
                  check_order_condition, count_offdiagonal_mobius,
                  enumerate_solutions_bruteforce, filter_offdiagonal)
from .series import embed_weight

SCHEMA = "krfermion/1"
EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 2, 3

DEFAULTS = {"level": 2, "degree": 3, "format": "json", "seed": 0, "max_det": DEFAULT_MAX_DET}


class InvalidInput(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


# -- input parsing ---------------------------------------------------------

def parse_modes(text) -> ModeMap:
    """Accept a JSON list of {a, m, mult} records or ``a:m:mult`` tokens."""
    if text is None:
        return ModeMap()
    try:
        if isinstance(text, list):
            return ModeMap.from_records(text)
        text = text.strip()
        if text.startswith("["):
            return ModeMap.from_records(json.loads(text))
        d = {}
        for tok in filter(None, (t.strip() for t in text.split(","))):
            parts = [int(x) for x in tok.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, m, mult = parts
            if mult <= 0:
                raise ValueError("multiplicities must be positive")
            d[(a, m)] = d.get((a, m), 0) + mult
        return ModeMap(d)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as e:
        raise InvalidInput(f"malformed mode list {text!r}: {e}") from None


def parse_weight(text, n: int) -> tuple:
    try:
        if isinstance(text, list):
            w = tuple(int(x) for x in text)
        else:
            w = tuple(int(x) for x in text.replace("[", "").replace("]", "").split(","))
    except ValueError:
        raise InvalidInput(f"malformed weight {text!r}") from None
    if len(w) != n:
        raise InvalidInput(f"weight {text!r} needs {n} coordinates")
    return w


def load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        if path.endswith(".json"):
            data = json.loads(raw)
        else:
            try:
                import tomllib
            except ModuleNotFoundError:  # Python < 3.11
                import tomli as tomllib
            data = tomllib.loads(raw.decode())
    except ValueError as e:
        raise InvalidInput(f"cannot read config {path}: {e}") from None
    if not isinstance(data, dict):
        raise InvalidInput(f"config {path} must hold a table of options")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _cartan(args):
    name = args.algebra_pos or args.algebra
    if not name:
        raise InvalidInput("an algebra is required (e.g. --algebra B2)")
    try:
        return build_cartan(AlgebraId.parse(str(name)))
    except InvalidAlgebra as e:
        raise InvalidInput(str(e)) from None


def _checked_modes(c, modes: ModeMap, what: str) -> ModeMap:
    try:
        return modes.validate(c)
    except ValueError as e:
        raise InvalidInput(f"{what}: {e}") from None


def _positive(name, value):
    if value is None or int(value) < 1:
        raise InvalidInput(f"--{name} must be a positive integer")
    return int(value)


# -- commands ---------------------------------------------------------------

def cmd_qsys(args, c):
    l = _positive("level", args.level)
    table = fermionic_qtable(c, l)
    res = check_qsystem(c, table)
    conv = check_convergence(table)
    ok = not res and all(conv.values())
    payload = {
        "level": l,
        "residuals": {f"{a},{m}": s.to_json() for (a, m), s in sorted(res.items())},
        "convergence": {str(a): v for a, v in sorted(conv.items())},
        "ok": ok,
    }
    if not args.check:
        payload["series"] = table.to_json()
    rows = [{"a": a, "m": m, "residual_terms": len(res[(a, m)].terms) if (a, m) in res else 0}
            for (a, m) in table.modes() if m <= c.tt(a) * l]
    return payload, rows, ok or not args.check


def _all_weights(c, nu) -> list:
    out = set()
    for mu in dominant_weights_below(c, highest_weight(c, nu)):
        out |= weyl_orbit(c, mu)
    return sorted(out, reverse=True)


def cmd_mult(args, c):
    nu = _checked_modes(c, parse_modes(args.nu), "--nu")
    if args.weight is not None:
        weights = [parse_weight(args.weight, c.n)]
    elif args.all_weights:
        weights = _all_weights(c, nu)
    else:
        weights = sorted(dominant_weights_below(c, highest_weight(c, nu)), reverse=True)
    rows = []
    for lam in weights:
        r = weight_multiplicity_r(c, nu, lam)
        dominant = all(x >= 0 for x in lam)
        k = weight_multiplicity_k(c, nu, lam) if dominant else None
        if r or k:
            rows.append({"weight": list(lam), "r": r, "k": k})
    return {"nu": nu.to_records(), "weights": rows}, rows, True


def cmd_char(args, c):
    if args.kr:
        try:
            a, m = (int(x) for x in args.kr.split(","))
        except ValueError:
            raise InvalidInput(f"--kr expects a,m; got {args.kr!r}") from None
        if not 1 <= a <= c.n or m < 0:
            raise InvalidInput(f"--kr {args.kr} out of range")
        try:
            ch = classical_kr_character(c, a, m)
        except ValueError as e:
            raise InvalidInput(str(e)) from None
        label = {"kr": [a, m]}
    elif args.nu:
        ch = kr_tensor_character(c, _checked_modes(c, parse_modes(args.nu), "--nu"))
        label = {"nu": parse_modes(args.nu).to_records()}
    elif args.weight is not None:
        lam = parse_weight(args.weight, c.n)
        if any(x < 0 for x in lam):
            raise InvalidInput("irreducible characters need a dominant weight")
        ch = irreducible_character(c, lam)
        label = {"weight": list(lam)}
    else:
        raise InvalidInput("char needs --kr a,m, --nu or --weight")
    dec = decompose_into_irreducibles(c, ch)
    rows = [{"weight": list(w), "mult": v} for w, v in dec.items()]
    payload = dict(label, decomposition=rows, dimension=ch.dimension())
    return payload, rows, True


def sce_report(c, nu, N, max_det=DEFAULT_MAX_DET) -> dict:
    inst = build_sce(c, nu, N)
    det = inst.det()
    mob = count_offdiagonal_mobius(inst)
    out = {
        "detA": det,
        "mobius_count": str(mob.value),
        "R": r_number(c, nu, N).value,
        "order_ok": check_order_condition(c, nu, N),
        "p_nonneg": inst.p_nonneg(),
        "bruteforce_count": None,
        "generic_count": None,
    }
    try:
        sols = enumerate_solutions_bruteforce(inst, max_det=max_det)
    except SingularSCE as e:
        out["bruteforce_note"] = str(e)
    else:
        off = filter_offdiagonal(inst, sols)
        denom = prod(factorial(v) for v in inst.N.values())
        out["bruteforce_count"] = str(Fraction(len(off), denom))
        out["generic_count"] = sum(1 for u in off if check_genericity(inst, u))
    return out


def cmd_sce(args, c):
    if args.action != "count":
        raise InvalidInput(f"unknown sce action {args.action!r}")
    nu = _checked_modes(c, parse_modes(args.nu), "--nu")
    N = _checked_modes(c, parse_modes(args.pattern), "--pattern")
    if not N:
        raise InvalidInput("sce count needs a nonzero --pattern")
    out = sce_report(c, nu, N, max_det=int(args.max_det))
    ok = True
    if out["p_nonneg"] and out["bruteforce_count"] is not None:
        ok = Fraction(out["bruteforce_count"]) == Fraction(out["mobius_count"]) == out["R"]
    out["consistent"] = ok
    return out, [out], ok


# -- verification suites ----------------------------------------------------

def verify_qsystem(c, l) -> dict:
    table = fermionic_qtable(c, l)
    res = check_qsystem(c, table)
    conv = check_convergence(table)
    return {"ok": not res and all(conv.values()),
            "residual_modes": [list(k) for k in sorted(res)],
            "convergence": {str(a): v for a, v in conv.items()}}


def verify_characters(c, l) -> dict:
    if c.algebra.family not in "ABCD":
        return {"ok": True, "skipped": "no classical formula for this type"}
    trunc = level_truncation(c, l)
    bad = []
    for a in range(1, c.n + 1):
        for m in range(1, c.tt(a) * l + 1):
            hw = [0] * c.n
            hw[a - 1] = m
            lhs = embed_weight(c, classical_kr_character(c, a, m), hw, trunc)
            if lhs != r_series(c, ModeMap.delta(a, m), l):
                bad.append([a, m])
    return {"ok": not bad, "mismatches": bad}


def small_nus(c, cap: int):
    modes = [(a, m) for a in range(1, c.n + 1) for m in range(1, cap + 1)]

    def rec(i, left, cur):
        if i == len(modes):
            if cur:
                yield ModeMap(cur)
            return
        a, m = modes[i]
        for v in range(left // m + 1):
            if v:
                cur[(a, m)] = v
            yield from rec(i + 1, left - v * m, cur)
            cur.pop((a, m), None)

    yield from rec(0, cap, {})


def verify_completeness(c, cap: int = 2) -> dict:
    if c.algebra.family not in "ABCD":
        return {"ok": True, "skipped": "no classical formula for this type"}
    bad = []
    for nu in small_nus(c, cap):
        ch = kr_tensor_character(c, nu)
        for lam, v in ch.items():
            if weight_multiplicity_r(c, nu, lam) != v:
                bad.append({"nu": nu.to_records(), "weight": list(lam), "kind": "r"})
        dec = decompose_into_irreducibles(c, ch)
        for lam in sorted(w for w in ch.support() if all(x >= 0 for x in w)):
            if weight_multiplicity_k(c, nu, lam) != dec.get(lam, 0):
                bad.append({"nu": nu.to_records(), "weight": list(lam), "kind": "k"})
    return {"ok": not bad, "mismatches": bad}


def random_sce_instance(c, rng, max_strings=4):
    nu = {}
    for _ in range(rng.randint(1, 3)):
        key = (rng.randint(1, c.n), rng.randint(1, 3))
        nu[key] = nu.get(key, 0) + rng.randint(1, 4)
    N = {}
    for _ in range(rng.randint(1, max_strings)):
        key = (rng.randint(1, c.n), rng.randint(1, 3))
        N[key] = N.get(key, 0) + 1
    return ModeMap(nu), ModeMap(N)


def verify_sce(c, seed: int, samples: int = 10, max_det: int = 10 ** 4) -> dict:
    rng = random.Random(seed)
    done, tries, bad = 0, 0, []
    while done < samples and tries < 200 * samples:
        tries += 1
        nu, N = random_sce_instance(c, rng)
        inst = build_sce(c, nu, N)
        if not inst.p_nonneg():
            continue
        det = inst.det()
        if det == 0 or abs(det) > max_det:
            continue
        rep = sce_report(c, nu, N, max_det)
        if not Fraction(rep["bruteforce_count"]) == Fraction(rep["mobius_count"]) == rep["R"]:
            bad.append({"nu": nu.to_records(), "N": N.to_records()})
        done += 1
    return {"ok": not bad, "instances": done, "mismatches": bad}


def run_verify(args, c) -> dict:
    suite = args.suite
    l = _positive("level", args.level)
    D = _positive("degree", args.degree)
    out = {}
    if suite in ("genseries", "all"):
        lg = min(l, 1) if suite == "all" else l
        out["generating"] = verify_generating_identities(c, ModeMap.delta(1, 1), lg, D).to_json()
        out["zv_jacobian"] = verify_zv_jacobian(c, lg, D).to_json()
        out["binomial_expansion"] = verify_binomial_expansion(c, lg, min(D, 2)).to_json()
    if suite in ("qsystem", "all"):
        out["qsystem"] = verify_qsystem(c, l)
    if suite in ("characters", "all"):
        out["characters"] = verify_characters(c, l)
    if suite in ("completeness", "all"):
        out["completeness"] = verify_completeness(c)
    if suite in ("k0", "all"):
        out["k0"] = verify_k0_identities(c, l).to_json()
    if suite in ("bfunction", "all"):
        fails = verify_b_identities(c)
        out["bfunction"] = {"ok": not any(fails.values()),
                            "failures": {k: len(v) for k, v in fails.items()}}
    if suite in ("sce", "all") and c.n <= 2:
        out["sce"] = verify_sce(c, int(args.seed))
    if suite in ("weyl", "all") and c.algebra.family in "EFG":
        rep = weyl_invariance_report(c, ModeMap.delta(1, 1))
        # experimental: reported, never counted as a failure
        out["weyl_invariance_experimental"] = dict(rep, ok=True)
    if suite == "convergence":
        out["convergence"] = convergence_sanity()
    if not out:
        raise InvalidInput(f"nothing to verify for suite {suite!r} on {c.algebra}")
    return out


def cmd_verify(args, c):
    out = run_verify(args, c)
    # the K0 check is only a theorem for classical types
    ok = all(v.get("ok", True) for k, v in out.items()
             if not (k == "k0" and v.get("info", {}).get("experimental")))
    rows = [{"check": k, "ok": v.get("ok", True)} for k, v in sorted(out.items())]
    return {"level": args.level, "degree": args.degree, "results": out, "ok": ok}, rows, ok


COMMANDS = {"qsys": cmd_qsys, "mult": cmd_mult, "char": cmd_char, "sce": cmd_sce,
            "verify": cmd_verify}

VERIFY_SUITES = ["all", "genseries", "qsystem", "characters", "completeness", "k0",
                 "bfunction", "sce", "weyl", "convergence"]


def _add_common(p):
    p.add_argument("algebra_pos", nargs="?", metavar="ALGEBRA",
                   help="algebra such as A2, B3, G2 (same as --algebra)")
    p.add_argument("--algebra")
    p.add_argument("--nu", help='JSON [{"a":1,"m":1,"mult":2}] or tokens a:m:mult,...')
    p.add_argument("--pattern", help="string pattern N, same syntax as --nu")
    p.add_argument("--level", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--seed", type=int)
    p.add_argument("--max-det", type=int, dest="max_det", help="brute-force guard on |det A|")
    p.add_argument("--config", help="TOML or JSON file with default option values")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="krfermion", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("qsys", help="fermionic Q-table and Q-system residuals")
    q.add_argument("--check", action="store_true", help="exit 2 on any nonzero residual")

    m = sub.add_parser("mult", help="weight multiplicities r and k")
    m.add_argument("--weight", help="a single weight, comma separated")
    m.add_argument("--all-weights", action="store_true", dest="all_weights")

    ch = sub.add_parser("char", help="classical characters and decompositions")
    ch.add_argument("--kr", help="KR character a,m")
    ch.add_argument("--weight", help="irreducible character of a dominant weight")

    s = sub.add_parser("sce", help="string center equation counts")
    s.add_argument("action", choices=["count"])

    v = sub.add_parser("verify", help="run identity checks")
    v.add_argument("suite", choices=VERIFY_SUITES)

    for sp in (q, m, ch, s, v):
        _add_common(sp)
    return p


def _apply_config(args):
    config = load_config(args.config) if getattr(args, "config", None) else {}
    for key, value in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if isinstance(getattr(args, "nu", None), list):
        args.nu = json.dumps(args.nu)
    if isinstance(getattr(args, "pattern", None), list):
        args.pattern = json.dumps(args.pattern)


def render(payload: dict, rows, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        rows = rows or []
        cols = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                        for k, v in r.items()})
        return buf.getvalue()
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        c = _cartan(args)
        payload, rows, ok = COMMANDS[args.command](args, c)
    except (InvalidInput, OSError, json.JSONDecodeError) as e:
        print(f"krfermion: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    payload = dict(payload, schema=SCHEMA, algebra=str(c.algebra), command=args.command)
    text = render(payload, rows, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
