"""Local HTTP+JSON service for the trajectory-steering front end.

Single-session, localhost-only, no auth: an analyst's desk tool. The session
(models, windowed poles, trajectories) is built once at startup; reads are
side-effect-free, mutations are serialized behind a lock and bump a revision
counter for optimistic concurrency (a stale revision in a mutation gets 409
and the client retries after reloading).

    GET    /energies                     [{index, file_index, energy}], revision
    GET    /poles/{k}                    windowed, filtered poles with residues
    GET    /zeros/{k}
    GET    /dcs/{k}?n=181                exact DCS vs theta
    GET    /deflection/{k}?n=200         deflection function and phase vs J
    GET    /unfolded/{k}?kind=f|g&n=100  winding-angle amplitude samples
    GET    /contributions?labels=..&mode=..&theta=..&power_np=..
    POST   /trajectories                 {label, mode, seed, picks?, revision}
    DELETE /trajectories/{label}
    POST   /export                       write dcs.traj/dcs.resid/*sm files
    GET    /session                      summary (labels, revision, config echo)

Errors are {code, message, candidates?} with HTTP 400/404/409. All numbers
are JSON decimals serialized with full double precision.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import numpy as np

from camdcs import workflow
from camdcs.errors import CamdcsError, SelectionError, ValidationError
from camdcs.quadrature import unfolded_f, unfolded_g
from camdcs.regge import follow_trajectory
from camdcs.scattering import deflection_function, pws_amplitude
from camdcs.pade import s_phase_and_modulus

log = logging.getLogger(__name__)


class ApiState:
    """Session plus the mutation lock and revision bookkeeping."""

    def __init__(self, session):
        self.session = session
        self.lock = threading.Lock()

    # -- reads ---------------------------------------------------------------

    def energies(self):
        s = self.session
        return [
            {"index": i, "file_index": a.table.file_index, "energy": a.table.energy}
            for i, a in enumerate(s.analyses)
        ]

    def analysis(self, index):
        if not (0 <= index < len(self.session.analyses)):
            raise ValidationError(f"energy index {index} out of range")
        return self.session.analyses[index]

    def poles(self, index):
        a = self.analysis(index)
        return [
            {"id": i, "re_j": p.real, "im_j": p.imag,
             "re_res": r.real, "im_res": r.imag}
            for i, (p, r) in enumerate(a.pz.poles)
        ]

    def zeros(self, index):
        a = self.analysis(index)
        return [{"re_j": z.real, "im_j": z.imag} for z in a.pz.zeros]

    # -- mutations -----------------------------------------------------------

    def post_trajectory(self, payload):
        session = self.session
        revision = payload.get("revision")
        if revision is not None and int(revision) != session.revision:
            raise _Conflict(
                f"stale revision {revision}, current is {session.revision}"
            )
        label = payload.get("label") or f"trajectory-{len(session.trajectories) + 1}"
        if label in session.trajectories:
            raise ValidationError(f"trajectory {label!r} already exists")
        mode = payload.get("mode", "auto")
        if mode not in ("auto", "manual"):
            raise ValidationError(f"mode must be auto or manual, got {mode!r}")
        config = dataclasses.replace(
            session.config, first_run=False, follow_by_hand=(mode == "manual")
        )
        selector = workflow.make_selector(
            {"seed": payload.get("seed"), "picks": payload.get("picks", {})}
        )
        models = [(a.table.energy, a.model) for a in session.analyses]
        trajectory = follow_trajectory(models, config, selector, label=label)
        session.trajectories[label] = trajectory
        session.revision += 1
        workflow._save_aux_trajectories(
            workflow._output_dir(session), session.trajectories.values()
        )
        return self.trajectory_summary(trajectory)

    def delete_trajectory(self, label):
        session = self.session
        if label not in session.trajectories:
            raise _NotFound(f"no trajectory {label!r}")
        del session.trajectories[label]
        session.revision += 1
        workflow._save_aux_trajectories(
            workflow._output_dir(session), session.trajectories.values()
        )

    def export(self):
        session = self.session
        written = []
        if session.trajectories:
            last = list(session.trajectories.values())[-1]
            written.extend(workflow._emit_trajectory_files(session, last))
        written.extend(workflow.emit_accumulated_files(session))
        return [str(p) for p in written if p is not None]

    @staticmethod
    def trajectory_summary(trajectory):
        return {
            "label": trajectory.label,
            "mode": trajectory.mode,
            "gaps": list(trajectory.gaps),
            "points": [
                [p.energy, p.j_position.real, p.j_position.imag,
                 p.residue.real, p.residue.imag]
                for p in trajectory.points
            ],
        }


class _Conflict(CamdcsError):
    pass


class _NotFound(CamdcsError):
    pass


def make_handler(state, static_dir=None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            log.debug("http: " + fmt, *args)

        # -- plumbing ---------------------------------------------------------

        def _send_json(self, payload, status=200):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _send_error_json(self, exc):
            if isinstance(exc, _Conflict):
                status, code = 409, "conflict"
            elif isinstance(exc, _NotFound):
                status, code = 404, "not_found"
            elif isinstance(exc, SelectionError):
                status, code = 400, "selection"
            elif isinstance(exc, ValidationError):
                status, code = 400, "validation"
            else:
                status, code = 500, "internal"
            payload = {"code": code, "message": str(exc)}
            if isinstance(exc, SelectionError) and exc.candidates:
                payload["candidates"] = [[c.real, c.imag] for c in exc.candidates]
            self._send_json(payload, status)

        def _read_body(self):
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            try:
                return json.loads(self.rfile.read(length).decode("utf-8"))
            except json.JSONDecodeError as exc:
                raise ValidationError(f"malformed JSON body: {exc}") from exc

        def _require_session(self):
            if not state.session.analyses:
                raise _Conflict("no session: the energy window selected no files")

        # -- routing ----------------------------------------------------------

        def do_GET(self):
            try:
                url = urlparse(self.path)
                query = {k: v[-1] for k, v in parse_qs(url.query).items()}
                with state.lock:
                    handled = self._route_get(url.path, query)
                if handled is None and static_root is not None:
                    self._serve_static(url.path)
                elif handled is None:
                    raise _NotFound(f"no route {url.path}")
            except Exception as exc:  # noqa: BLE001 - boundary
                self._send_error_json(exc)

        def _route_get(self, path, query):
            s = state.session
            if path == "/energies":
                self._require_session()
                self._send_json({"revision": s.revision, "energies": state.energies()})
            elif m := re.fullmatch(r"/poles/(\d+)", path):
                self._require_session()
                self._send_json({"revision": s.revision,
                                 "poles": state.poles(int(m.group(1)))})
            elif m := re.fullmatch(r"/zeros/(\d+)", path):
                self._require_session()
                self._send_json({"revision": s.revision,
                                 "zeros": state.zeros(int(m.group(1)))})
            elif m := re.fullmatch(r"/dcs/(\d+)", path):
                self._require_session()
                self._send_json(self._dcs(int(m.group(1)), query))
            elif m := re.fullmatch(r"/deflection/(\d+)", path):
                self._require_session()
                self._send_json(self._deflection(int(m.group(1)), query))
            elif m := re.fullmatch(r"/unfolded/(\d+)", path):
                self._require_session()
                self._send_json(self._unfolded(int(m.group(1)), query))
            elif path == "/contributions":
                self._require_session()
                self._send_json(self._contributions(query))
            elif path == "/session":
                self._send_json({
                    "revision": s.revision,
                    "labels": list(s.trajectories.keys()),
                    "theta_r": s.config.theta_r,
                    "power_np": s.config.power_np,
                    "cam_window": list(s.config.cam_window),
                    "n_energies": len(s.analyses),
                })
            else:
                return None
            return True

        def do_POST(self):
            try:
                url = urlparse(self.path)
                payload = self._read_body()
                with state.lock:
                    self._require_session()
                    if url.path == "/trajectories":
                        summary = state.post_trajectory(payload)
                        self._send_json(
                            {"revision": state.session.revision, "trajectory": summary}
                        )
                    elif url.path == "/export":
                        self._send_json({"written": state.export()})
                    else:
                        raise _NotFound(f"no route {url.path}")
            except Exception as exc:  # noqa: BLE001 - boundary
                self._send_error_json(exc)

        def do_DELETE(self):
            try:
                url = urlparse(self.path)
                m = re.fullmatch(r"/trajectories/(.+)", url.path)
                if not m:
                    raise _NotFound(f"no route {url.path}")
                with state.lock:
                    state.delete_trajectory(m.group(1))
                    self._send_json({"revision": state.session.revision})
            except Exception as exc:  # noqa: BLE001 - boundary
                self._send_error_json(exc)

        # -- computed reads ----------------------------------------------------

        def _dcs(self, index, query):
            a = state.analysis(index)
            n = int(query.get("n", 181))
            grid = np.linspace(0.0, math.pi, n)
            return {
                "energy": a.table.energy,
                "theta_deg": [math.degrees(t) for t in grid],
                "dcs": [abs(pws_amplitude(a.table, t, a.k)) ** 2 for t in grid],
            }

        def _deflection(self, index, query):
            a = state.analysis(index)
            n = int(query.get("n", 200))
            j_grid = np.linspace(0.0, a.table.jfin - 1.0, n)
            defl = deflection_function(a.model, j_grid + 0.5)
            theta, _ = s_phase_and_modulus(a.model, j_grid + 0.5)
            return {
                "energy": a.table.energy,
                "j": j_grid.tolist(),
                "deflection_rad": np.asarray(defl).tolist(),
                "phase_rad": np.asarray(theta).tolist(),
            }

        def _unfolded(self, index, query):
            a = state.analysis(index)
            kind = query.get("kind", "f")
            if kind not in ("f", "g"):
                raise ValidationError(f"kind must be f or g, got {kind!r}")
            if a.lam_max is None:
                raise ValidationError(
                    f"E={a.table.energy}: |S| does not decay; no unfolded amplitudes"
                )
            n = int(query.get("n", 100))
            nl = float(query.get("nl", state.session.config.winding_range[0]))
            nr = float(query.get("nr", state.session.config.winding_range[1]))
            grid = np.linspace(nl * math.pi, nr * math.pi, n)
            fn = unfolded_f if kind == "f" else unfolded_g
            vals = [fn(a.model, p, lam_max=a.lam_max) for p in grid]
            return {
                "energy": a.table.energy,
                "phi": grid.tolist(),
                "re": [v.real for v in vals],
                "im": [v.imag for v in vals],
                "abs": [abs(v) for v in vals],
            }

        def _contributions(self, query):
            labels = [s for s in query.get("labels", "").split(",") if s]
            mode = query.get("mode", "sideway")
            theta = query.get("theta")
            power_np = query.get("power_np")
            rows = workflow.contributions_rows(
                state.session, labels, mode,
                theta_deg=None if theta is None else float(theta),
                power_np=None if power_np is None else int(power_np),
            )
            return {
                "revision": state.session.revision,
                "labels": labels,
                "mode": mode,
                "rows": [[r[0], float(r[1]), float(r[2]), float(r[3])] for r in rows],
            }

        # -- static front end --------------------------------------------------

        def _serve_static(self, path):
            rel = path.lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                raise _NotFound(f"no such asset {path}")
            body = target.read_bytes()
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def make_server(config, base_dir=".", host="127.0.0.1", port=0, static_dir=None):
    """Build the session and return an unstarted ThreadingHTTPServer."""
    session = workflow.build_session(config, base_dir, step=2 if not config.first_run else 1)
    state = ApiState(session)
    handler = make_handler(state, static_dir=static_dir)
    server = ThreadingHTTPServer((host, port), handler)
    server.camdcs_state = state
    return server


def serve(config, base_dir=".", host="127.0.0.1", port=8923, static_dir=None):
    server = make_server(config, base_dir, host, port, static_dir)
    log.info("serving on http://%s:%d/ (%d energies)",
             host, server.server_address[1], len(server.camdcs_state.session.analyses))
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
