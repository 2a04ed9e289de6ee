"""Command-line front end.

Exit codes: 0 success or pass, 1 a check failed, 2 usage or input error,
3 a size cap was hit.  Everything printed on stdout parses back with the
grammar of the owning module (sets print ``{}`` when empty).
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import families as fam
from . import ordinals as ordm
from . import trees, tsnorm, verify
from .errors import BudgetError, DomainError, UnsupportedFamily

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Exit(Exception):
    def __init__(self, status, message=None):
        super().__init__(message)
        self.status = status


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so :func:`run` can map errors to exit codes."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        raise _Exit(status, message)


def _value(parse):
    def conv(text):
        try:
            return parse(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    conv.__name__ = parse.__name__
    return conv


ordinal = _value(ordm.parse_ordinal)
family = _value(fam.parse_family)
finset = _value(fam.parse_finset)
vector = _value(tsnorm.parse_vector)
rational = _value(Fraction)


def _blocks(text):
    return [fam.parse_finset(b) for b in text.split(";")]


blocks = _value(_blocks)


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise ValueError(f"expected a non-negative integer, got {text}")
    return v


nonneg = _value(_nonneg)


def _fmt_set(F) -> str:
    return fam.format_finset(F) if F else "{}"


def _fmt_q(q: Fraction, digits: int | None) -> str:
    if digits is None:
        return str(q)
    scaled = round(q * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def _bool(b: bool) -> str:
    return "true" if b else "false"


# -- ordinal ------------------------------------------------------------------------

def _ordinal_eval(a):
    return EXIT_OK, ordm.format_ordinal(a.value)


def _ordinal_compare(a):
    return EXIT_OK, ordm.compare(a.left, a.right)


def _ordinal_fundseq(a):
    return EXIT_OK, ordm.format_ordinal(ordm.fund_seq(a.value, a.n))


def _ordinal_corollary(a):
    c = ordm.corollary_params(a.value)
    if c.schreier_case:
        return EXIT_OK, f"schreier-case\ngamma {ordm.format_ordinal(c.gamma)}"
    return EXIT_OK, f"gamma {ordm.format_ordinal(c.gamma)}\neta {ordm.format_ordinal(c.eta)}"


# -- family -------------------------------------------------------------------------

def _family_member(a):
    return EXIT_OK, _bool(fam.member(a.family, a.set))


def _family_admissible(a):
    return EXIT_OK, _bool(fam.is_admissible(a.family, a.blocks))


def _family_enumerate(a):
    members = sorted(fam.enumerate_members(a.family, a.ground), key=lambda F: (len(F), F))
    return EXIT_OK, "\n".join(_fmt_set(F) for F in members)


def _family_stdrep(a):
    rep = fam.standard_representation(a.outer, a.inner, a.set)
    return EXIT_OK, " ; ".join(_fmt_set(F) for F in rep)


def _family_derive(a):
    if a.set is None:
        return EXIT_OK, fam.format_family(fam.derivative_simplify(fam.Deriv(a.family, a.order)))
    if not a.order.is_finite:
        M = fam.derivative_simplify(fam.Deriv(a.family, a.order))
        return EXIT_OK, _bool(fam.member(M, a.set))
    return EXIT_OK, _bool(fam.derivative_member(a.family, a.set, int(a.order)))


def _family_index(a):
    return EXIT_OK, ordm.format_ordinal(fam.index(a.family))


def _family_regular(a):
    rep = fam.regularity_check(a.family, a.ground)
    lines = ["pass" if rep.ok else "fail"]
    lines += [f"missing {_fmt_set(F)}" for F in rep.missing_basics]
    for label, pairs in (("hereditary", rep.hereditary_violations),
                         ("spreading", rep.spreading_violations)):
        lines += [f"{label} {_fmt_set(F)} -> {_fmt_set(G)}" for F, G in pairs]
    return (EXIT_OK if rep.ok else EXIT_FAIL), "\n".join(lines)


# -- norm ---------------------------------------------------------------------------

def _norm_params(a):
    return tsnorm.NormParams(a.alpha, a.beta, a.variant)


def _stats(a, cache):
    if a.stats:
        s = cache.stats()
        print(f"cache entries={s['entries']} hits={s['hits']} misses={s['misses']}", file=sys.stderr)


def _norm_value(a):
    cache = tsnorm.NormCache()
    v = tsnorm.tsirelson_norm(a.vector, _norm_params(a), max_support=a.max_support, cache=cache)
    _stats(a, cache)
    return EXIT_OK, _fmt_q(v, a.decimal)


def _norm_iterate(a):
    ms = a.max_support if a.max_support is not None else tsnorm.ORACLE_SUPPORT_CAP
    v = tsnorm.iterate_norm(a.vector, _norm_params(a), a.n, max_support=ms)
    return EXIT_OK, _fmt_q(v, a.decimal)


def _norm_implicit(a):
    cache = tsnorm.NormCache()
    p = _norm_params(a)
    if len(a.vector) > a.max_support:
        raise BudgetError(f"support size {len(a.vector)} exceeds DP cap {a.max_support}")
    ok = tsnorm.implicit_check(a.vector, p, cache=cache)
    _stats(a, cache)
    return (EXIT_OK if ok else EXIT_FAIL), _bool(ok)


def _norm_family(a):
    return EXIT_OK, _fmt_q(tsnorm.family_norm(a.family, a.vector), a.decimal)


# -- tree ---------------------------------------------------------------------------

def _read_tree(a, normalize_with=None):
    text = sys.stdin.read() if a.file == "-" else Path(a.file).read_text()
    return trees.load_tree(text, normalize_with)


def _tree_order(a):
    return EXIT_OK, str(trees.tree_order(_read_tree(a)))


def _tree_build_fn(a):
    T = trees.build_Fn_tree(a.alpha, a.beta, a.n, a.ground)
    text = trees.dump_tree(T)
    if a.output:
        Path(a.output).write_text(text)
        return EXIT_OK, f"order {trees.tree_order(T)}\nnodes {len(T)}"
    return EXIT_OK, text.rstrip("\n")


def _tree_l1_check(a):
    p = _norm_params(a)
    T = _read_tree(a, p if a.normalize else None)
    cache = tsnorm.NormCache()
    lines, code = [], EXIT_OK
    for i, branch in enumerate(T.branches()):
        v = trees.l1_check_branch(branch, a.K, p, a.trials, a.seed * 100_003 + i, cache=cache)
        line = f"{v.status} {' ; '.join(tsnorm.format_vector(x) for x in branch)}"
        if v.witness is not None:
            line += " | witness " + ",".join(str(c) for c in v.witness)
            code = EXIT_FAIL
        lines.append(line)
    return code, "\n".join(lines)


# -- verify -------------------------------------------------------------------------

def _pick(a, **names):
    """Keyword arguments for a checker: flags that were given, renamed."""
    return {dst: getattr(a, src) for dst, src in names.items() if getattr(a, src) is not None}


def _verify(a):
    name = a.proposition
    if name == "all":
        reports = verify.run_all(a.seed)
    else:
        common = _pick(a, alpha="alpha", beta="beta", n="n", trials="trials", seed="seed",
                       ground="ground", max_support="max_support")
        allowed = {
            "L1a": ("beta", "trials", "seed"),
            "L2": ("alpha", "beta", "trials", "seed", "max_support"),
            "L3": ("alpha", "beta", "n", "trials", "seed", "ground", "max_support"),
            "L4": ("alpha", "beta", "n", "trials", "seed", "ground", "max_support"),
            "identities": ("alpha", "beta", "n", "ground"),
            "derivatives": ("ground", "seed"),
            "C7": ("alpha", "beta", "n"),
            "L8": ("trials", "seed"),
            "T14-lower": ("alpha", "beta", "n", "ground", "seed"),
        }[name]
        kwargs = {k: v for k, v in common.items() if k in allowed}
        if name == "derivatives" and a.trials is not None:
            kwargs["probes"] = a.trials
        if name == "T14-lower" and a.trials is not None:
            kwargs["spot_checks"] = a.trials
        reports = [verify.JOBS[name](**kwargs)]
    text = "\n".join(r.to_json(timing=a.timing) for r in reports)
    if a.report:
        Path(a.report).write_text(text + "\n")
    code = EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK
    return code, text


# -- parser -------------------------------------------------------------------------

def _add_norm_flags(p, vector_required=True):
    p.add_argument("--alpha", type=ordinal, default=ordm.ZERO)
    p.add_argument("--beta", type=ordinal, default=ordm.ONE)
    p.add_argument("--variant", choices=("plain", "squared"), default="plain")
    if vector_required:
        p.add_argument("--vector", type=vector, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tsirelson-index", description=__doc__.splitlines()[0])
    cmds = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    o = cmds.add_parser("ordinal", help="ordinal arithmetic below epsilon_0").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = o.add_parser("eval")
    p.add_argument("value", type=ordinal)
    p.set_defaults(fn=_ordinal_eval)
    p = o.add_parser("compare")
    p.add_argument("left", type=ordinal)
    p.add_argument("right", type=ordinal)
    p.set_defaults(fn=_ordinal_compare)
    p = o.add_parser("fundseq")
    p.add_argument("value", type=ordinal)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_ordinal_fundseq)
    p = o.add_parser("corollary")
    p.add_argument("value", type=ordinal)
    p.set_defaults(fn=_ordinal_corollary)

    f = cmds.add_parser("family", help="regular families of finite sets").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = f.add_parser("member")
    p.add_argument("--family", type=family, required=True)
    p.add_argument("--set", type=finset, required=True)
    p.set_defaults(fn=_family_member)
    p = f.add_parser("admissible")
    p.add_argument("--family", type=family, required=True)
    p.add_argument("--blocks", type=blocks, required=True, help="sets separated by ';'")
    p.set_defaults(fn=_family_admissible)
    p = f.add_parser("enumerate")
    p.add_argument("--family", type=family, required=True)
    p.add_argument("--ground", type=int, required=True)
    p.set_defaults(fn=_family_enumerate)
    p = f.add_parser("stdrep")
    p.add_argument("--outer", type=family, required=True)
    p.add_argument("--inner", type=family, required=True)
    p.add_argument("--set", type=finset, required=True)
    p.set_defaults(fn=_family_stdrep)
    p = f.add_parser("derive")
    p.add_argument("--family", type=family, required=True)
    p.add_argument("--order", type=ordinal, default=ordm.ONE)
    p.add_argument("--set", type=finset, help="decide membership in the derivative")
    p.set_defaults(fn=_family_derive)
    p = f.add_parser("index")
    p.add_argument("--family", type=family, required=True)
    p.set_defaults(fn=_family_index)
    p = f.add_parser("regular")
    p.add_argument("--family", type=family, required=True)
    p.add_argument("--ground", type=int, default=8)
    p.set_defaults(fn=_family_regular)

    nrm = cmds.add_parser("norm", help="exact Tsirelson-type norms").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    for name, fn in (("value", _norm_value), ("iterate", _norm_iterate),
                     ("implicit-check", _norm_implicit)):
        p = nrm.add_parser(name)
        _add_norm_flags(p)
        p.add_argument("--max-support", type=int,
                       default=None if name == "iterate" else tsnorm.DP_SUPPORT_CAP)
        p.add_argument("--decimal", type=nonneg, metavar="K", help="print rounded to K digits instead")
        p.add_argument("--stats", action="store_true", help="cache statistics on stderr")
        p.set_defaults(fn=fn)
        if name == "iterate":
            p.add_argument("--n", type=nonneg, required=True)
    p = nrm.add_parser("family")
    p.add_argument("--family", type=family, required=True)
    p.add_argument("--vector", type=vector, required=True)
    p.add_argument("--decimal", type=nonneg, metavar="K")
    p.set_defaults(fn=_norm_family)

    t = cmds.add_parser("tree", help="finite block trees").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = t.add_parser("order")
    p.add_argument("--file", required=True, help="tree file, '-' for stdin")
    p.set_defaults(fn=_tree_order)
    p = t.add_parser("build-fn")
    p.add_argument("--alpha", type=ordinal, default=ordm.ZERO)
    p.add_argument("--beta", type=ordinal, default=ordm.ONE)
    p.add_argument("--n", type=nonneg, required=True)
    p.add_argument("--ground", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(fn=_tree_build_fn)
    p = t.add_parser("l1-check")
    _add_norm_flags(p, vector_required=False)
    p.add_argument("--file", required=True, help="tree file, '-' for stdin")
    p.add_argument("--K", type=rational, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true", help="rescale vectors to norm one")
    p.set_defaults(fn=_tree_l1_check)

    p = cmds.add_parser("verify", help="run proposition checkers")
    p.add_argument("proposition", choices=tuple(verify.JOBS) + ("all",))
    p.add_argument("--alpha", type=ordinal)
    p.add_argument("--beta", type=ordinal)
    p.add_argument("--n", type=nonneg)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--ground", type=int)
    p.add_argument("--max-support", type=int)
    p.add_argument("--report", help="also write the records to this file")
    p.add_argument("--timing", action="store_true", help="fill in elapsed seconds")
    p.set_defaults(fn=_verify)
    return parser


def run(argv) -> tuple[int, str]:
    """Run one invocation; returns ``(exit_code, stdout_text)``.  Diagnostics go to stderr."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        return args.fn(args)
    except _Exit as exc:
        if exc.args and exc.args[0]:
            print(exc.args[0], file=sys.stderr, end="")
        return exc.status, ""
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE, ""
    except BudgetError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET, ""
    except (DomainError, UnsupportedFamily, ordm.OrdinalDomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""


def main(argv=None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    if out:
        print(out)
    return code
