import time

import pytest
from hypothesis import given

import cek_trace
from dlpcf.corpus import BY_NAME, PROGRAMS
from dlpcf.machines import (Counters, Stuck, Timeout, cek_step, numeral, run, show_process,
                            trace_lines)
from dlpcf.pcf_syntax import Num, arity, cbv_step, infer_pcf_type, parse_term
from strategies import nat_terms

# reference rows joined by a single arrow (not a collapsed segment)
SINGLE_STEPS = {0, 1, 2, 4, 5, 6, 7, 10, 11, 12, 13}


def test_cek_trace_value_and_steps():
    r = run(cek_trace.TERM, "cek")
    assert numeral(r) == 6
    assert r.value.env is None or isinstance(r.value.term, Num)
    assert r.counters == Counters(total=224, instantiation=24, lookups=63)


def test_cek_trace_configurations_in_order():
    shapes, _ = cek_trace.trace_shapes()
    idx = cek_trace.match_rows(shapes)
    assert None not in idx
    for k in SINGLE_STEPS:
        assert idx[k + 1] == idx[k] + 1, k


def test_cek_trace_is_fast():
    t0 = time.perf_counter()
    run(cek_trace.TERM, "cek")
    assert time.perf_counter() - t0 < 0.01


def test_trace_ends_with_value():
    lines, r = trace_lines(parse_term("s(1)"))
    assert lines[-1].startswith("<2> * e")
    assert numeral(r) == 2


@pytest.mark.parametrize("p", PROGRAMS, ids=lambda p: p.name)
def test_cbn_and_cbv_agree(p):
    ty = infer_pcf_type(p.term).type
    args = tuple(k + 1 for k in range(arity(ty)))
    assert numeral(run(p.term, "cek", args=args)) == numeral(run(p.term, "kam", args=args))


@given(nat_terms())
def test_machines_agree_with_source_reduction(t):
    ref = t
    while (nxt := cbv_step(ref)) is not None:
        ref = nxt
    assert numeral(run(t, "cek")) == ref.n
    assert numeral(run(t, "kam")) == ref.n


@given(nat_terms())
def test_runs_are_deterministic(t):
    a, b = run(t, "cek"), run(t, "cek")
    assert a == b


def test_cbv_evaluates_arguments_once():
    t = parse_term("(lam x. 0) (s(s(0)))")
    cek = run(t, "cek").counters.total
    kam = run(t, "kam").counters.total
    assert kam < cek  # call-by-name never looks at the argument


def test_instantiation_counts_functional_lookups():
    r = run(parse_term("(lam f. f (f 0)) (lam x. s(x))"), "cek")
    assert r.counters.instantiation == 2
    assert r.counters.lookups == 4


def test_fix_unfolding_is_an_instantiation():
    r = run(BY_NAME["add"].term, "cek", args=(2, 0))
    assert r.counters.instantiation >= 3


def test_timeout():
    with pytest.raises(Timeout) as e:
        run(parse_term("(fix f. lam x. f x) 0"), "cek", fuel=500)
    assert e.value.counters.total == 500


def test_stuck_on_open_term():
    with pytest.raises(Stuck):
        run(parse_term("y"), "cek")


def test_printer():
    shapes = []
    run(parse_term("(lam x. x) 1"), "cek", trace=lambda p, k: shapes.append(show_process(p)))
    assert shapes[0] == "<(lam x. x) 1> * e"
    assert shapes[1] == "<lam x. x> * arg<1> . e"


def test_step_function_is_pure():
    from dlpcf.machines import Closure, Process
    p = Process(Closure(cek_trace.TERM))
    assert cek_step(p) == cek_step(p)
