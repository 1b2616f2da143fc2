import pytest
from hypothesis import given, strategies as st

from mrapriori.engine import (
    InputSplit,
    JobError,
    JobSpec,
    partition_input,
    run_job,
    shuffle,
    sum_reducer,
)


@pytest.mark.parametrize("n, s, sizes", [
    (10, 3, [4, 3, 3]),
    (0, 3, [0, 0, 0]),
    (2, 5, [1, 1, 0, 0, 0]),
])
def test_partition_sizes(n, s, sizes):
    splits = partition_input(list(range(n)), s)
    assert [len(sp) for sp in splits] == sizes
    assert [sp.index for sp in splits] == list(range(s))


def test_partition_rejects_zero():
    with pytest.raises(ValueError):
        partition_input([1, 2], 0)


@given(st.lists(st.integers()), st.integers(1, 20))
def test_partition_reassembles(records, s):
    splits = partition_input(records, s)
    assert [r for sp in splits for r in sp.records] == records
    sizes = [len(sp) for sp in splits]
    assert max(sizes) - min(sizes) <= 1
    assert sizes == sorted(sizes, reverse=True)


def test_shuffle_examples():
    assert shuffle([("a", 1), ("b", 1), ("a", 1)]) == [("a", [1, 1]), ("b", [1])]
    assert shuffle([]) == []
    assert shuffle([("k", 3), ("k", 1), ("k", 2)]) == [("k", [1, 2, 3])]


def test_shuffle_orders_tuple_keys_by_size_then_lex():
    pairs = [((1, 10), 1), ((2,), 1), ((1, 2), 1), ((10,), 1)]
    assert [k for k, _ in shuffle(pairs)] == [(2,), (10,), (1, 2), (1, 10)]


@given(st.lists(st.tuples(st.sampled_from("abcde"), st.integers(0, 9))), st.randoms())
def test_shuffle_depends_only_on_multiset(pairs, rnd):
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    assert shuffle(pairs) == shuffle(shuffled)


def word_count(records, splits):
    return JobSpec(
        mapper=lambda r: [(r, 1)],
        reducer=sum_reducer,
        splits=partition_input(records, splits),
    )


def test_word_count():
    result = run_job(word_count(["a", "b", "a"], 2))
    assert result.outputs == {"a": 2, "b": 1}
    assert result.task_costs == [("job/map-0", 2), ("job/map-1", 1)]


def test_parallelism_does_not_change_result():
    records = [str(i % 7) for i in range(200)]
    ref = run_job(word_count(records, 16), parallelism=1)
    for p in (2, 4, 8):
        got = run_job(word_count(records, 16), parallelism=p)
        assert got.outputs == ref.outputs
        assert list(got.outputs) == list(ref.outputs)
        assert got.task_costs == ref.task_costs


@given(st.lists(st.sampled_from("xyzw")), st.integers(1, 16))
def test_split_count_invariance(records, k):
    assert run_job(word_count(records, k)).outputs == run_job(word_count(records, 1)).outputs


def test_empty_splits():
    assert run_job(word_count([], 3)).outputs == {}
    assert run_job(JobSpec(lambda r: [(r, 1)], sum_reducer, [])).outputs == {}


def test_combiner_sees_local_output_only():
    seen = []

    def combiner(key, values):
        seen.append((key, list(values)))
        return sum(values)

    spec = JobSpec(lambda r: [(r, 1)], sum_reducer, partition_input("aba", 2), combiner=combiner)
    assert run_job(spec).outputs == {"a": 2, "b": 1}
    assert seen == [("a", [1]), ("b", [1]), ("a", [1])]


def test_cost_conservation():
    splits = partition_input(list(range(23)), 5)
    cost = lambda split: 3 * len(split.records) + 1
    result = run_job(JobSpec(lambda r: [(r % 2, 1)], sum_reducer, splits, cost_model=cost), 4)
    assert sum(result.makespan_inputs) == sum(cost(s) for s in splits)
    assert result.num_map_tasks == 5


def test_mapper_error_names_task():
    def mapper(r):
        if r == 7:
            raise KeyError("boom")
        return [(r, 1)]

    spec = JobSpec(mapper, sum_reducer, partition_input(range(10), 4), name="wc")
    for p in (1, 4):
        with pytest.raises(JobError) as info:
            run_job(spec, p)
        assert info.value.task_id == "wc/map-2"
        assert isinstance(info.value.__cause__, KeyError)


def test_reducer_error_names_task():
    def reducer(key, values):
        raise ValueError("bad")

    with pytest.raises(JobError) as info:
        run_job(JobSpec(lambda r: [(r, 1)], reducer, [InputSplit(0, ("a",))], name="j"))
    assert info.value.task_id == "j/reduce"
