"""Rebuilding traces from sequences and profiles, and the text formats."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import locmetrics as lm
from locmetrics.errors import ParseError, ValidationError

from conftest import (
    PAIR_SAME_BOTH_HISTS,
    PAIR_SAME_RD_HIST,
    PAIR_SAME_RT_HIST,
    make_random_trace,
    make_sealed_trace,
)

INF = lm.INFINITE

FIXTURE_IDS = (
    *PAIR_SAME_BOTH_HISTS,
    *PAIR_SAME_RT_HIST,
    *PAIR_SAME_RD_HIST,
    (1, 2, 3, 2, 1),
    (1,),
    (1, 1, 1, 1),
)

traces = st.lists(st.integers(1, 9), min_size=1, max_size=150).map(
    lm.Trace.from_ids
)


def rebuild_from_rt(t: lm.Trace) -> lm.Trace:
    return lm.ai_from_rt(lm.reuse_time_sequence(t))


def rebuild_from_rd(t: lm.Trace) -> lm.Trace:
    return lm.ai_from_rd(lm.reuse_distance_sequence(t))


def rebuild_from_pd_rt(t: lm.Trace) -> lm.Trace:
    return lm.ai_from_pd_rt(lm.per_datum(lm.reuse_time_sequence(t), t))


def rebuild_from_pd_rd(t: lm.Trace) -> lm.Trace:
    return lm.ai_from_pd_rd(lm.per_datum(lm.reuse_distance_sequence(t), t))


REBUILDERS = (
    rebuild_from_rt,
    rebuild_from_rd,
    rebuild_from_pd_rt,
    rebuild_from_pd_rd,
)


class TestRoundTrips:
    @pytest.mark.parametrize("ids", FIXTURE_IDS)
    @pytest.mark.parametrize("rebuild", REBUILDERS)
    def test_fixture_traces_round_trip(self, rebuild, ids):
        t = lm.Trace.from_ids(ids)
        assert rebuild(t).accesses == t.accesses

    @pytest.mark.parametrize(
        "kind, m, reps", [("cyclic", 5, 4), ("sawtooth", 4, 3), ("fused", 3, 5)]
    )
    @pytest.mark.parametrize("rebuild", REBUILDERS)
    def test_generated_traces_round_trip(self, rebuild, kind, m, reps):
        t = lm.generate(kind, m, reps)
        assert rebuild(t).accesses == t.accesses

    @settings(max_examples=300, deadline=None)
    @given(traces)
    def test_random_traces_round_trip_all_four_ways(self, t):
        for rebuild in REBUILDERS:
            assert rebuild(t).accesses == t.accesses

    def test_round_trip_from_seeded_random_traces(self, rng):
        for _ in range(200):
            t = make_random_trace(rng)
            for rebuild in REBUILDERS:
                assert rebuild(t).accesses == t.accesses

    def test_round_trip_from_sealed_traces(self, rng):
        for _ in range(50):
            t = make_sealed_trace(rng)
            for rebuild in REBUILDERS:
                assert rebuild(t).accesses == t.accesses


class TestSequenceInverses:
    def test_reuse_time_inverse_on_known_sequence(self):
        seq = lm.ReuseSequence(lm.REUSE_TIME, (INF, INF, 2, 2, 1, 3))
        assert lm.ai_from_rt(seq).accesses == (1, 2, 1, 2, 2, 1)

    def test_reuse_time_inverse_follows_non_minimal_pointers_too(self):
        seq = lm.ReuseSequence(lm.REUSE_TIME, (INF, INF, 2, 2, 1, 5))
        assert lm.ai_from_rt(seq).accesses == (1, 2, 1, 2, 2, 1)

    def test_reuse_distance_inverse_on_known_sequence(self):
        seq = lm.ReuseSequence(lm.REUSE_DISTANCE, (INF, INF, 2, 2, 1, 2))
        assert lm.ai_from_rd(seq).accesses == (1, 2, 1, 2, 2, 1)

    def test_reuse_time_before_start_is_rejected_with_position(self):
        seq = lm.ReuseSequence(lm.REUSE_TIME, (INF, 3))
        with pytest.raises(ValidationError, match="position 2"):
            lm.ai_from_rt(seq)

    def test_reuse_distance_beyond_stack_is_rejected_with_position(self):
        seq = lm.ReuseSequence(lm.REUSE_DISTANCE, (INF, 2))
        with pytest.raises(ValidationError, match="position 2"):
            lm.ai_from_rd(seq)

    def test_kind_mismatch_is_rejected(self):
        rt = lm.ReuseSequence(lm.REUSE_TIME, (INF,))
        rd = lm.ReuseSequence(lm.REUSE_DISTANCE, (INF,))
        with pytest.raises(ValidationError, match="reuse-time"):
            lm.ai_from_rt(rd)
        with pytest.raises(ValidationError, match="reuse-distance"):
            lm.ai_from_rd(rt)


class TestProfileInverses:
    def test_time_profiles_schedule_by_absolute_position(self):
        profs = (
            lm.PerDatumProfile(7, 1, (2, 3), lm.REUSE_TIME),
            lm.PerDatumProfile(9, 2, (2,), lm.REUSE_TIME),
            lm.PerDatumProfile(3, 5, (), lm.REUSE_TIME),
        )
        t = lm.ai_from_pd_rt(profs)
        assert t.accesses == (1, 2, 1, 2, 3, 1)

    def test_colliding_time_profiles_report_the_collision_time(self):
        profs = (
            lm.PerDatumProfile(1, 1, (2,), lm.REUSE_TIME),
            lm.PerDatumProfile(2, 2, (1,), lm.REUSE_TIME),
        )
        with pytest.raises(ValidationError, match="time 3") as exc:
            lm.ai_from_pd_rt(profs)
        assert "collide" in str(exc.value)

    def test_gapped_time_profiles_report_the_empty_time(self):
        profs = (
            lm.PerDatumProfile(1, 1, (), lm.REUSE_TIME),
            lm.PerDatumProfile(2, 3, (), lm.REUSE_TIME),
        )
        with pytest.raises(ValidationError, match="time 2"):
            lm.ai_from_pd_rt(profs)

    def test_distance_profiles_with_no_candidate_report_the_time(self):
        profs = (lm.PerDatumProfile(1, 2, (), lm.REUSE_DISTANCE),)
        with pytest.raises(ValidationError, match="time 1"):
            lm.ai_from_pd_rd(profs)

    def test_distance_profiles_with_shared_first_are_rejected(self):
        profs = (
            lm.PerDatumProfile(1, 1, (), lm.REUSE_DISTANCE),
            lm.PerDatumProfile(2, 1, (), lm.REUSE_DISTANCE),
        )
        with pytest.raises(ValidationError, match="share a"):
            lm.ai_from_pd_rd(profs)

    def test_duplicate_datum_is_rejected(self):
        profs = (
            lm.PerDatumProfile(1, 1, (), lm.REUSE_TIME),
            lm.PerDatumProfile(1, 2, (), lm.REUSE_TIME),
        )
        with pytest.raises(ValidationError, match="duplicate"):
            lm.ai_from_pd_rt(profs)

    def test_profile_kind_mismatch_is_rejected(self):
        rt_prof = (lm.PerDatumProfile(1, 1, (), lm.REUSE_TIME),)
        rd_prof = (lm.PerDatumProfile(1, 1, (), lm.REUSE_DISTANCE),)
        with pytest.raises(ValidationError, match="needs 'rd'"):
            lm.ai_from_pd_rd(rt_prof)
        with pytest.raises(ValidationError, match="needs 'rt'"):
            lm.ai_from_pd_rt(rd_prof)


class TestMostRecentTieBreak:
    """Distance profiles only rebuild when ties prefer the freshest datum."""

    RECENCY_IDS = (1, 2, 3, 2, 1)

    def profiles(self):
        t = lm.Trace.from_ids(self.RECENCY_IDS)
        return lm.per_datum(lm.reuse_distance_sequence(t), t)

    def test_most_recent_preference_rebuilds_the_trace(self):
        assert lm.ai_from_pd_rd(self.profiles()).accesses == self.RECENCY_IDS

    def test_least_recent_preference_fails_to_rebuild(self):
        from locmetrics.reconstruct import ai_from_pd_rd

        try:
            rebuilt = ai_from_pd_rd(self.profiles(), _least_recent=True)
        except ValidationError:
            return
        assert rebuilt.accesses != self.RECENCY_IDS

    def test_least_recent_preference_breaks_somewhere_on_random_traces(self, rng):
        broken = 0
        for _ in range(300):
            t = make_random_trace(rng, n_max=40, m_max=6)
            profs = lm.per_datum(lm.reuse_distance_sequence(t), t)
            from locmetrics.reconstruct import ai_from_pd_rd

            try:
                rebuilt = ai_from_pd_rd(profs, _least_recent=True)
            except ValidationError:
                broken += 1
                continue
            if rebuilt.accesses != t.accesses:
                broken += 1
        assert broken > 0


class TestSequenceSerialization:
    def test_format_then_parse_round_trips(self):
        t = lm.Trace.from_ids(PAIR_SAME_BOTH_HISTS[0])
        for seq in (lm.reuse_time_sequence(t), lm.reuse_distance_sequence(t)):
            again = lm.parse_reuse_sequence(lm.format_reuse_sequence(seq))
            assert again == seq

    def test_exact_text_layout(self):
        seq = lm.ReuseSequence(lm.REUSE_TIME, (INF, INF, 2, 2, 1, 5))
        assert (
            lm.format_reuse_sequence(seq) == "#kind=rt\ninf\ninf\n2\n2\n1\n5\n"
        )

    def test_blank_lines_and_bare_comments_are_ignored(self):
        seq = lm.parse_reuse_sequence("# a note\n\n#kind=rd\ninf\n1\n\n")
        assert seq == lm.ReuseSequence(lm.REUSE_DISTANCE, (INF, 1))

    def test_unknown_header_is_rejected_with_line(self):
        with pytest.raises(ParseError, match="line 1"):
            lm.parse_reuse_sequence("#n=4\n#kind=rt\ninf\n")

    def test_duplicate_kind_header_is_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            lm.parse_reuse_sequence("#kind=rt\n#kind=rt\ninf\n")

    def test_multi_token_line_is_rejected_with_line(self):
        with pytest.raises(ParseError, match="line 3"):
            lm.parse_reuse_sequence("#kind=rt\ninf\n1 2\n")

    def test_non_integer_value_is_rejected_with_line(self):
        with pytest.raises(ParseError, match="line 2"):
            lm.parse_reuse_sequence("#kind=rt\nabc\n")

    def test_missing_kind_header_is_rejected(self):
        with pytest.raises(ParseError, match="#kind"):
            lm.parse_reuse_sequence("inf\n1\n")

    def test_parsed_sequence_rejects_non_positive_values(self):
        with pytest.raises(ValidationError, match="position 1"):
            lm.parse_reuse_sequence("#kind=rt\n0\n")

    def test_parsed_but_impossible_sequence_fails_on_rebuild(self):
        seq = lm.parse_reuse_sequence("#kind=rt\n5\n")
        with pytest.raises(ValidationError, match="position 1"):
            lm.ai_from_rt(seq)


class TestProfileSerialization:
    def test_format_then_parse_round_trips(self):
        t = lm.Trace.from_ids(PAIR_SAME_RT_HIST[0])
        profs = lm.per_datum(lm.reuse_distance_sequence(t), t)
        again = lm.parse_profiles(lm.format_profiles(profs))
        assert again == profs

    def test_exact_text_layout(self):
        profs = (
            lm.PerDatumProfile(1, 1, (2, 3), lm.REUSE_TIME),
            lm.PerDatumProfile(2, 2, (), lm.REUSE_TIME),
        )
        assert lm.format_profiles(profs) == "#kind=rt\n1 1 2 3\n2 2\n"

    def test_zero_profiles_are_rejected(self):
        with pytest.raises(ValidationError, match="zero"):
            lm.format_profiles(())

    def test_mixed_kinds_are_rejected(self):
        profs = (
            lm.PerDatumProfile(1, 1, (), lm.REUSE_TIME),
            lm.PerDatumProfile(2, 2, (), lm.REUSE_DISTANCE),
        )
        with pytest.raises(ValidationError, match="mix"):
            lm.format_profiles(profs)

    def test_data_before_header_is_rejected(self):
        with pytest.raises(ParseError, match="before"):
            lm.parse_profiles("1 1 2\n#kind=rt\n")

    def test_short_line_is_rejected_with_line(self):
        with pytest.raises(ParseError, match="line 2"):
            lm.parse_profiles("#kind=rt\n1\n")

    def test_non_integer_field_is_rejected_with_line(self):
        with pytest.raises(ParseError, match="line 2"):
            lm.parse_profiles("#kind=rt\n1 x 2\n")

    def test_duplicate_datum_line_is_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            lm.parse_profiles("#kind=rt\n1 1\n1 2\n")

    def test_missing_kind_header_is_rejected(self):
        with pytest.raises(ParseError, match="#kind"):
            lm.parse_profiles("\n")

    def test_unknown_header_is_rejected(self):
        with pytest.raises(ParseError, match="unexpected header"):
            lm.parse_profiles("#m=3\n#kind=rt\n1 1\n")

    def test_relabelled_profiles_rebuild_the_same_shape(self, rng):
        for _ in range(50):
            t = make_random_trace(rng, n_max=40, m_max=6)
            profs = lm.per_datum(lm.reuse_time_sequence(t), t)
            relabelled = tuple(
                lm.PerDatumProfile(100 + p.datum, p.first, p.reuses, p.kind)
                for p in profs
            )
            rebuilt = lm.ai_from_pd_rt(relabelled)
            assert rebuilt.accesses == t.accesses
