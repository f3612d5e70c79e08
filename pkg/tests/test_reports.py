from shiftscope.io.reports import (
    DISTANCE_HEADER,
    EVALUATION_HEADER,
    PREDICTION_HEADER,
    format_value,
    parse_csv,
    render_csv,
)


def test_headers():
    assert ",".join(DISTANCE_HEADER) == "base,target,method,value"
    assert ",".join(EVALUATION_HEADER) == "target,true_acc,pred_acc,abs_err"
    assert ",".join(PREDICTION_HEADER) == "target,method,pred_acc"


def test_floats_use_repr():
    assert format_value(0.1) == "0.1"
    assert format_value(1 / 3) == repr(1 / 3)
    assert format_value(4) == "4"
    assert format_value("doc") == "doc"


def test_render_csv():
    text = render_csv(DISTANCE_HEADER, [("base", "noise-00", "doc", 0.25)])
    assert text == "base,target,method,value\nbase,noise-00,doc,0.25\n"


def test_parse_csv_reads_rendered_rows():
    text = render_csv(PREDICTION_HEADER, [("t1", "doc", 0.5), ("t2", "ac", 0.75)])
    rows = parse_csv(text)
    assert rows[1] == {"target": "t2", "method": "ac", "pred_acc": "0.75"}
    assert float(rows[0]["pred_acc"]) == 0.5
