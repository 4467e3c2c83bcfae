"""HTTP control surface.

Endpoints map one-to-one onto the seven control actions plus the
displacement views:

    POST   /acquisition/display   start acquisition (conflict if running)
    POST   /acquisition/stop      stop acquisition (idle no-op)
    DELETE /live                  clear the live table (conflict if running)
    GET    /view/live             live displacement view (server-side recon)
    GET    /live/accelerations    raw live records since a sequence number
    POST   /experiments           archive the current live table
    GET    /experiments           list archived experiment ids
    GET    /experiments/{id}/view archived displacement view
    DELETE /experiments           clear the archive
    GET    /config                client-facing service parameters
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel

from .errors import ConflictError, DomainError, NotFoundError
from .ingest import AcquisitionController, AcquisitionStatus
from .service import LiveViewEngine, ServiceConfig, experiment_view
from .store import Store


class DisplayRequest(BaseModel):
    source: str | None = None
    pace: float = 1.0  # real-time pacing by default; 0 for flat-out replay


def create_app(store: Store, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    controller = AcquisitionController(store)
    engine = LiveViewEngine(store, config)

    app = FastAPI(title="dispmon")
    app.state.store = store
    app.state.config = config
    app.state.controller = controller
    app.state.engine = engine

    def _state_json():
        s = controller.state
        return {
            "status": s.status.value,
            "source": s.source,
            "records_ingested": s.records_ingested,
            "frames_rejected": s.frames_rejected,
        }

    @app.get("/config")
    def get_config():
        r = config.reconstruction
        return {
            "poll_interval_s": config.poll_interval_s,
            "display_rate_hz": config.display_rate_hz,
            "max_points": config.max_points,
            "sample_rate_hz": r.sample_rate_hz,
            "window_len": r.window_len,
        }

    @app.post("/acquisition/display")
    def acquisition_display(req: DisplayRequest | None = None):
        req = req or DisplayRequest()
        try:
            controller.start(req.source or config.source, pace=req.pace)
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except DomainError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _state_json()

    @app.post("/acquisition/stop")
    def acquisition_stop():
        controller.stop()
        return _state_json()

    @app.delete("/live")
    def delete_live():
        if controller.state.status is AcquisitionStatus.RUNNING:
            raise HTTPException(status_code=409, detail="acquisition running")
        removed = store.clear_live()
        engine.reset()
        return {"removed": removed}

    @app.get("/view/live")
    def view_live(as_of_seq: int = Query(default=0, ge=0)):
        return engine.view(as_of_seq).to_json()

    @app.get("/live/accelerations")
    def live_accelerations(since: int = Query(default=0, ge=0)):
        records = store.fetch_live(since)
        return {
            "records": [
                {
                    "seq_id": r.seq_id,
                    "t": r.t,
                    "ax": r.ax,
                    "ay": r.ay,
                    "az": r.az,
                    "gx": r.gx,
                    "gy": r.gy,
                    "gz": r.gz,
                    "sensor_id": r.sensor_id,
                    "reg_time_ms": r.reg_time_ms,
                }
                for r in records
            ]
        }

    @app.post("/experiments")
    def save_experiment():
        try:
            exp_id = store.save_experiment()
        except DomainError as exc:
            raise HTTPException(status_code=412, detail=str(exc))
        return {"id": exp_id, "exp_time": store.experiment_time(exp_id)}

    @app.get("/experiments")
    def list_experiments():
        return {
            "experiments": [
                {"id": i, "exp_time": store.experiment_time(i)}
                for i in store.list_experiments()
            ]
        }

    @app.get("/experiments/{exp_id}/view")
    def get_experiment_view(exp_id: str):
        try:
            return experiment_view(store, exp_id, config).to_json()
        except NotFoundError:
            raise HTTPException(status_code=404, detail=f"unknown experiment {exp_id}")
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.delete("/experiments")
    def clear_experiments():
        return {"removed": store.clear_experiments()}

    return app
