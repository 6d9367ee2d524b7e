"""Tests for CSV ingestion, quarterly transforms, and the daily aggregator."""

import datetime
import math

import numpy as np
import pytest

from twinreg import (
    DataError,
    ModelFrame,
    ParseError,
    aggregate_prior_month,
    apply_transforms,
    encode_time,
    parse_csv,
    parse_daily_csv,
)

HEADER = "date,loss,total_pop,ratio,aplir,ffr,av_claims"


def row(d, loss="0.5", pop="300000000", ratio="0.97", aplir="3.3", ffr="0.1", claims="3000000"):
    return f"{d},{loss},{pop},{ratio},{aplir},{ffr},{claims}"


def make_csv(*rows: str, header: str = HEADER) -> bytes:
    return ("\n".join([header, *rows]) + "\n").encode()


class TestParseCsv:
    def test_basic_parse(self):
        obs = parse_csv(make_csv(row("2011-04-01"), row("2011-07-01", loss="0.6")))
        assert len(obs) == 2
        assert obs[0].date == datetime.date(2011, 4, 1)
        assert obs[0].loss == 0.5
        assert obs[0].total_pop == 300000000.0
        assert obs[1].loss == 0.6

    def test_rows_sorted_by_date(self):
        obs = parse_csv(make_csv(row("2012-01-01"), row("2011-04-01"), row("2011-10-01")))
        assert [o.date.isoformat() for o in obs] == [
            "2011-04-01", "2011-10-01", "2012-01-01",
        ]

    def test_header_column_order_is_free(self):
        shuffled = "ffr,date,av_claims,loss,ratio,total_pop,aplir"
        text = f"{shuffled}\n0.1,2011-04-01,3000000,0.5,0.97,300000000,3.3\n"
        obs = parse_csv(text.encode())
        assert obs[0].loss == 0.5
        assert obs[0].ffr == 0.1
        assert obs[0].av_claims == 3000000.0

    def test_accepts_str_and_file_objects(self, tmp_path):
        text = make_csv(row("2011-04-01"))
        assert parse_csv(text.decode()) == parse_csv(text)
        path = tmp_path / "x.csv"
        path.write_bytes(text)
        with open(path, "rb") as fh:
            assert parse_csv(fh) == parse_csv(text)

    def test_rows_with_any_empty_field_are_dropped(self):
        obs = parse_csv(
            make_csv(
                row("2011-04-01"),
                row("2011-07-01", loss=""),
                row("2011-10-01", claims=""),
                row("2012-01-01"),
            )
        )
        assert [o.date.isoformat() for o in obs] == ["2011-04-01", "2012-01-01"]

    def test_drop_happens_before_validation(self):
        # a row missing one field is discarded even if another field is garbage
        obs = parse_csv(make_csv(row("2011-04-01"), row("2011-07-01", loss="", ratio="junk")))
        assert len(obs) == 1

    def test_blank_lines_are_skipped(self):
        text = make_csv(row("2011-04-01")) + b"\n\n"
        assert len(parse_csv(text)) == 1

    def test_missing_header_column(self):
        with pytest.raises(ParseError):
            parse_csv(b"date,loss\n2011-04-01,0.5\n")

    def test_extra_header_column(self):
        with pytest.raises(ParseError):
            parse_csv((HEADER + ",bonus\n").encode() + b"2011-04-01,1,2,3,4,5,6,7\n")

    def test_malformed_date_reports_line_number(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_csv(make_csv(row("2011-04-01"), row("not-a-date")))

    def test_non_quarterly_date_rejected(self):
        with pytest.raises(ParseError, match="quarter"):
            parse_csv(make_csv(row("2011-05-01")))

    def test_mid_month_date_rejected(self):
        with pytest.raises(ParseError):
            parse_csv(make_csv(row("2011-04-15")))

    def test_duplicate_date_rejected(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_csv(make_csv(row("2011-04-01"), row("2011-04-01", loss="0.7")))

    def test_non_numeric_value_reports_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_csv(make_csv(row("2011-04-01", ffr="abc")))

    def test_nonpositive_population_rejected(self):
        with pytest.raises(ParseError):
            parse_csv(make_csv(row("2011-04-01", pop="0")))

    def test_negative_ratio_rejected(self):
        with pytest.raises(ParseError):
            parse_csv(make_csv(row("2011-04-01", ratio="-0.5")))

    def test_negative_claims_rejected(self):
        with pytest.raises(ParseError):
            parse_csv(make_csv(row("2011-04-01", claims="-1")))

    def test_wrong_field_count_rejected(self):
        text = (HEADER + "\n2011-04-01,0.5,300000000\n").encode()
        with pytest.raises(ParseError, match="line 2"):
            parse_csv(text)


class TestEncodeTime:
    def test_origin_maps_to_one_one(self):
        assert encode_time(datetime.date(2011, 4, 1), datetime.date(2011, 4, 1)) == (1, 1)

    def test_quarter_and_year_counters(self):
        origin = datetime.date(2011, 4, 1)
        assert encode_time(datetime.date(2011, 7, 1), origin) == (2, 1)
        assert encode_time(datetime.date(2012, 1, 1), origin) == (4, 2)
        assert encode_time(datetime.date(2012, 4, 1), origin) == (5, 2)
        assert encode_time(datetime.date(2020, 4, 1), origin) == (37, 10)

    def test_date_before_origin_rejected(self):
        with pytest.raises(DataError):
            encode_time(datetime.date(2011, 1, 1), datetime.date(2011, 4, 1))

    def test_non_quarter_start_rejected(self):
        with pytest.raises(DataError):
            encode_time(datetime.date(2011, 5, 1), datetime.date(2011, 4, 1))
        with pytest.raises(DataError):
            encode_time(datetime.date(2011, 7, 1), datetime.date(2011, 4, 2))


class TestApplyTransforms:
    def test_column_values(self):
        obs = parse_csv(
            make_csv(
                row("2011-04-01", pop="309412550", claims="3885942"),
                row("2011-07-01", pop="310000000", claims="1000000"),
            )
        )
        frame = apply_transforms(obs)
        assert frame.adj_pop[0] == 309412550 / 1e8
        assert frame.exp_claims[0] == math.exp(3885942 / 1e6)
        assert frame.exp_claims[1] == math.exp(1.0)
        assert list(frame.month_index) == [1, 2]
        assert list(frame.year_index) == [1, 1]

    def test_origin_is_earliest_date(self):
        obs = parse_csv(make_csv(row("2012-04-01"), row("2011-10-01")))
        frame = apply_transforms(obs)
        assert frame.dates[0] == datetime.date(2011, 10, 1)
        assert list(frame.month_index) == [1, 3]
        assert list(frame.year_index) == [1, 2]

    def test_transform_is_deterministic(self):
        obs = parse_csv(make_csv(row("2011-04-01"), row("2011-07-01", loss="0.9")))
        a, b = apply_transforms(obs), apply_transforms(obs)
        assert np.array_equal(a.loss, b.loss)
        assert a.dates == b.dates


class TestModelFrameRoundTrip:
    def test_csv_round_trip_is_exact(self):
        rng = np.random.default_rng(5)
        rows = []
        dates = ["2011-04-01", "2011-07-01", "2011-10-01", "2012-01-01"]
        for d in dates:
            rows.append(
                row(
                    d,
                    loss=repr(float(rng.uniform(0.1, 2.0))),
                    pop=str(int(rng.integers(3e8, 3.3e8))),
                    ratio=repr(float(rng.uniform(0.96, 0.98))),
                    aplir=repr(float(rng.uniform(3, 5))),
                    ffr=repr(float(rng.uniform(0.0, 2.5))),
                    claims=str(int(rng.integers(1e6, 4e6))),
                )
            )
        frame = apply_transforms(parse_csv(make_csv(*rows)))
        back = ModelFrame.from_csv_bytes(frame.to_csv_bytes(), dates=frame.dates)
        assert back.dates == frame.dates
        assert np.array_equal(back.month_index, frame.month_index)
        for name in ("loss", "adj_pop", "ratio", "aplir", "ffr", "exp_claims"):
            assert np.array_equal(getattr(back, name), getattr(frame, name)), name

    def test_regressor_columns_order(self):
        frame = apply_transforms(parse_csv(make_csv(row("2011-04-01"), row("2011-07-01"))))
        cols = frame.regressor_columns()
        assert len(cols) == 7
        assert np.array_equal(cols[0], frame.month_index.astype(float))
        assert np.array_equal(cols[3], frame.ratio)
        assert np.array_equal(cols[6], frame.exp_claims)


class TestAggregatePriorMonth:
    def daily(self, *pairs):
        return [(datetime.date.fromisoformat(d), v) for d, v in pairs]

    def test_mean_of_prior_month(self):
        daily = self.daily(
            ("2011-03-01", 2.0), ("2011-03-15", 4.0), ("2011-03-31", 6.0),
            ("2011-04-01", 100.0), ("2011-02-28", 100.0),
        )
        assert aggregate_prior_month(daily, datetime.date(2011, 4, 1)) == 4.0

    def test_january_uses_december_of_prior_year(self):
        daily = self.daily(("2011-12-10", 1.0), ("2011-12-20", 3.0), ("2012-01-05", 99.0))
        assert aggregate_prior_month(daily, datetime.date(2012, 1, 1)) == 2.0

    def test_missing_values_are_skipped(self):
        daily = self.daily(("2011-03-01", 5.0)) + [(datetime.date(2011, 3, 2), None)]
        assert aggregate_prior_month(daily, datetime.date(2011, 4, 1)) == 5.0

    def test_no_usable_values_raises(self):
        daily = self.daily(("2011-01-01", 5.0))
        with pytest.raises(DataError):
            aggregate_prior_month(daily, datetime.date(2011, 4, 1))


class TestParseDailyCsv:
    def test_happy_path_with_gaps(self):
        text = b"date,value\n2011-03-01,1.5\n2011-03-02,\n2011-03-03,2.5\n"
        out = parse_daily_csv(text)
        assert out == [
            (datetime.date(2011, 3, 1), 1.5),
            (datetime.date(2011, 3, 2), None),
            (datetime.date(2011, 3, 3), 2.5),
        ]

    def test_bad_header(self):
        with pytest.raises(ParseError):
            parse_daily_csv(b"day,value\n2011-03-01,1\n")

    def test_bad_number_reports_line(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_daily_csv(b"date,value\n2011-03-01,1\n2011-03-02,zz\n")
