"""HTTP service: endpoint contracts and pointwise parity with the CLI files."""

import dataclasses
import json
import math
import threading
import urllib.error
import urllib.request

import pytest

from camdcs import workflow
from camdcs.config import parse_run_config
from camdcs.server import make_server


@pytest.fixture()
def api(small_workspace):
    base, cfg, tables = small_workspace
    config = dataclasses.replace(parse_run_config(cfg), first_run=False)
    server = make_server(config, base_dir=base, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    url = f"http://127.0.0.1:{server.server_address[1]}"
    yield url, server, base, tables
    server.shutdown()
    server.server_close()


def get(url, path):
    with urllib.request.urlopen(url + path) as resp:
        return json.loads(resp.read().decode())


def post(url, path, payload):
    req = urllib.request.Request(
        url + path, data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read().decode())


def request_error(url, path, payload=None, method="GET"):
    data = None if payload is None else json.dumps(payload).encode()
    req = urllib.request.Request(url + path, data=data, method=method)
    try:
        urllib.request.urlopen(req)
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read().decode())
    raise AssertionError("expected an HTTP error")


def test_energies_ascending(api):
    url, _server, _base, tables = api
    payload = get(url, "/energies")
    energies = [e["energy"] for e in payload["energies"]]
    assert energies == sorted(energies)
    assert energies == [t.energy for t in tables]
    assert [e["index"] for e in payload["energies"]] == list(range(len(tables)))


def test_poles_include_published_position(api):
    url, _server, _base, tables = api
    idx = [t.energy for t in tables].index(30.0)
    poles = get(url, f"/poles/{idx}")["poles"]
    best = min(poles, key=lambda p: abs(complex(p["re_j"], p["im_j"])
                                        - complex(8.2356, 0.335)))
    assert abs(best["re_j"] - 8.2356) < 0.05
    assert abs(best["im_j"] - 0.3350) < 0.05
    assert "re_res" in best and "im_res" in best
    zeros = get(url, f"/zeros/{idx}")["zeros"]
    assert all(0.0 <= z["im_j"] <= 2.0 for z in zeros)


def test_pole_index_out_of_range(api):
    url, *_ = api
    code, body = request_error(url, "/poles/99")
    assert code == 400
    assert body["code"] == "validation"


def test_unknown_route(api):
    url, *_ = api
    code, body = request_error(url, "/nope")
    assert code == 404


def test_auto_trajectory_spans_window(api):
    url, _server, _base, tables = api
    rev = get(url, "/energies")["revision"]
    out = post(url, "/trajectories",
               {"label": "res", "mode": "auto", "seed": [7.18, 0.22],
                "revision": rev})
    points = out["trajectory"]["points"]
    assert len(points) == len(tables)
    assert out["revision"] == rev + 1
    re_parts = [p[1] for p in points]
    assert all(b > a for a, b in zip(re_parts, re_parts[1:]))


def test_manual_trajectory_three_picks(api):
    url, _server, _base, tables = api
    picks = {f"{tables[1].energy:.6f}": None, f"{tables[2].energy:.6f}": [8.0, 0.3]}
    out = post(url, "/trajectories",
               {"label": "hand", "mode": "manual", "seed": [7.18, 0.22],
                "picks": picks})
    points = out["trajectory"]["points"]
    assert [p[0] for p in points][:2] == [tables[0].energy, tables[2].energy]
    assert tables[1].energy in out["trajectory"]["gaps"]


def test_stale_revision_conflict(api):
    url, *_ = api
    rev = get(url, "/energies")["revision"]
    post(url, "/trajectories", {"label": "a", "seed": [7.18, 0.22], "revision": rev})
    code, body = request_error(
        url, "/trajectories",
        {"label": "b", "seed": [7.18, 0.22], "revision": rev}, method="POST",
    )
    assert code == 409
    assert body["code"] == "conflict"


def test_selection_error_carries_candidates(api):
    url, *_ = api
    code, body = request_error(
        url, "/trajectories", {"label": "bad", "seed": [25.0, 5.0]}, method="POST",
    )
    assert code == 400
    assert body["code"] == "selection"
    assert body["candidates"]


def test_delete_trajectory(api):
    url, *_ = api
    post(url, "/trajectories", {"label": "gone", "seed": [7.18, 0.22]})
    req = urllib.request.Request(url + "/trajectories/gone", method="DELETE")
    with urllib.request.urlopen(req) as resp:
        assert json.loads(resp.read().decode())["revision"] >= 1
    code, body = request_error(url, "/trajectories/gone", method="DELETE")
    assert code == 404


def test_contributions_no_trajectories_background_equals_exact(api):
    url, *_ = api
    rows = get(url, "/contributions?labels=&mode=forward")["rows"]
    for _e, tail, background, exact in rows:
        assert tail == 0.0
        assert background == exact


def test_contributions_unknown_label(api):
    url, *_ = api
    code, body = request_error(url, "/contributions?labels=ghost&mode=forward")
    assert code == 400


def test_contributions_match_cli_file_pointwise(api):
    """API rows equal the dcs.fwsm file written by the CLI path to 1e-12."""
    url, server, base, _tables = api
    post(url, "/trajectories", {"label": "res", "mode": "auto", "seed": [7.18, 0.22]})
    post(url, "/export", {})
    rows = get(url, "/contributions?labels=res&mode=forward")["rows"]
    file_rows = []
    for line in (base / "output" / "dcs.fwsm").read_text().splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            file_rows.append([float(v) for v in body.split()])
    assert len(rows) == len(file_rows)
    for (e, tail, bg, _exact), (fe, ftail, fbg) in zip(rows, file_rows):
        assert e == pytest.approx(fe, abs=1e-12)
        assert tail == pytest.approx(ftail, abs=1e-12 * max(1.0, abs(ftail)))
        assert bg == pytest.approx(fbg, abs=1e-12 * max(1.0, abs(fbg)))


def test_export_matches_scripted_cli(api, tmp_path, ex1_params):
    """server-side export == CLI selections-file path on the same data"""
    from conftest import make_workspace
    from camdcs.hardsphere import generate_hard_sphere_tables

    url, server, base, tables = api
    post(url, "/trajectories", {"label": "res", "mode": "auto", "seed": [7.18, 0.22]})
    post(url, "/export", {})
    api_traj = (base / "output" / "dcs.traj").read_bytes()

    cli_tables = generate_hard_sphere_tables(
        ex1_params, [t.energy for t in tables], jmax=27, jfin=15
    )
    base2, cfg2 = make_workspace(tmp_path / "cli", cli_tables)
    config = dataclasses.replace(parse_run_config(cfg2), first_run=False)
    session = workflow.build_session(
        config, base2, step=2, selections={"seed": [7.18, 0.22], "picks": {}}
    )
    workflow.run_step2(session, label="res")
    assert (base2 / "output" / "dcs.traj").read_bytes() == api_traj
    assert ((base2 / "output" / "dcs.fwsm").read_bytes()
            == (base / "output" / "dcs.fwsm").read_bytes())


def test_reads_have_no_side_effects(api):
    url, *_ = api
    rev = get(url, "/energies")["revision"]
    get(url, "/poles/0")
    get(url, "/dcs/0?n=7")
    get(url, "/deflection/0?n=9")
    get(url, "/unfolded/0?kind=g&n=5")
    assert get(url, "/energies")["revision"] == rev


def test_dcs_endpoint(api):
    url, *_ = api
    payload = get(url, "/dcs/0?n=19")
    assert len(payload["theta_deg"]) == 19
    assert payload["theta_deg"][0] == 0.0
    assert payload["theta_deg"][-1] == pytest.approx(180.0)
    assert all(v >= 0.0 for v in payload["dcs"])


def test_deflection_endpoint(api):
    url, _server, _base, tables = api
    payload = get(url, f"/deflection/{len(tables) - 1}?n=50")
    assert len(payload["j"]) == 50
    assert len(payload["deflection_rad"]) == 50
    # starts near pi for a head-on reactive collision
    assert payload["deflection_rad"][0] == pytest.approx(math.pi, abs=0.6)


def test_unfolded_endpoint_kinds(api):
    url, *_ = api
    f_payload = get(url, "/unfolded/0?kind=f&n=9&nl=0&nr=2")
    g_payload = get(url, "/unfolded/0?kind=g&n=9&nl=0&nr=2")
    assert f_payload["phi"][0] == 0.0
    assert f_payload["phi"][-1] == pytest.approx(2 * math.pi)
    assert f_payload["abs"] != g_payload["abs"]
    code, _ = request_error(url, "/unfolded/0?kind=x")
    assert code == 400


def test_session_summary(api):
    url, _server, _base, tables = api
    payload = get(url, "/session")
    assert payload["n_energies"] == len(tables)
    assert payload["theta_r"] == 75.0


def test_empty_session_is_conflict(small_workspace):
    base, cfg, _tables = small_workspace
    config = dataclasses.replace(
        parse_run_config(cfg), first_run=False, energy_window=(500.0, 600.0)
    )
    server = make_server(config, base_dir=base, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    url = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        code, body = request_error(url, "/energies")
        assert code == 409
        assert body["code"] == "conflict"
    finally:
        server.shutdown()
        server.server_close()
