"""``toybox`` command line: a thin client over the HTTP service.

Every subcommand except ``serve`` talks to the service API: against a
remote server when ``--server`` is given, otherwise against an in-process
instance of the app (no network, no setup). Bulk suite execution happens
service-side in a single request; ``play`` drives an env session step by
step so it can record frames and dump state documents mid-episode.
"""

from __future__ import annotations

import argparse
import asyncio
import base64
import json
import os
import sys
from contextlib import asynccontextmanager

import httpx
import numpy as np


def _parse_agent_params(pairs) -> dict:
    params = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise SystemExit(f"--agent-param expects key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def _load_config_arg(path: str | None) -> dict | None:
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@asynccontextmanager
async def _client(server: str | None):
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=httpx.Timeout(None)) as client:
            yield client
    else:
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://toybox.local", timeout=httpx.Timeout(None)
        ) as client:
            yield client


def _check(response: httpx.Response) -> dict:
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise SystemExit(f"service error {response.status_code}: {detail}")
    return response.json()


async def _cmd_run(args) -> int:
    request = {
        "suite": args.suite,
        "agent": {
            "name": args.agent,
            "seed": args.seed,
            "params": _parse_agent_params(args.agent_param),
        },
        "config": _load_config_arg(args.config),
        "budget_frames": args.budget_frames,
        "trials": args.trials,
        "base_seed": args.seed,
        "frame_skip": args.frame_skip,
        "parallel": args.parallel,
        "formats": args.formats.split(","),
        "gate": args.gate,
        "gate_threshold": args.gate_threshold,
    }
    if args.angles:
        request["angles"] = [float(a) for a in args.angles.split(",")]
    async with _client(args.server) as client:
        payload = _check(await client.post("/suites/run", json=request))
    os.makedirs(args.out, exist_ok=True)
    for name, text in payload["files"].items():
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    summary = payload["summary"]
    print(
        f"suite {summary['suite']}: {summary['cases']} cases x "
        f"{summary['trials_per_case']} trials, overall success rate "
        f"{summary['success_rate_overall']:.3f}"
    )
    print(f"results written to {args.out}")
    if payload.get("gate"):
        gate = payload["gate"]
        if gate["passed"]:
            print(f"gate: PASS (threshold {gate['threshold']})")
        else:
            failing = ", ".join(gate["failing_cases"][:10])
            more = "" if len(gate["failing_cases"]) <= 10 else " ..."
            print(f"gate: FAIL (threshold {gate['threshold']}): {failing}{more}")
            return 1
    return 0


async def _cmd_play(args) -> int:
    state_document = None
    if args.load_state:
        with open(args.load_state, encoding="utf-8") as fh:
            state_document = fh.read()
    record_dir = args.record_frames
    if record_dir:
        os.makedirs(record_dir, exist_ok=True)
    request = {
        "config": _load_config_arg(args.config),
        "state_document": state_document,
        "frame_skip": args.frame_skip,
        "episode_policy": args.episode_policy,
        "seed": args.seed,
        "agent": {
            "name": args.agent,
            "seed": args.seed,
            "params": _parse_agent_params(args.agent_param),
        },
        "render": bool(record_dir),
    }
    async with _client(args.server) as client:
        created = _check(await client.post("/envs", json=request))
        env_id = created["env_id"]
        shape = tuple(created["observation_space"]["shape"])
        dumped = False

        async def maybe_dump(view) -> None:
            nonlocal dumped
            if dumped or args.dump_state is None or view["frame"] < args.at_frame:
                return
            doc = _check(await client.get(f"/envs/{env_id}/state"))
            with open(args.dump_state, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(doc["document"])
            print(f"state dumped to {args.dump_state} at frame {view['frame']}")
            dumped = True

        def maybe_record(payload, view) -> None:
            if not record_dir or not payload.get("frame_b64"):
                return
            from .render import write_png

            frame = np.frombuffer(
                base64.b64decode(payload["frame_b64"]), dtype=np.uint8
            ).reshape(shape)
            write_png(os.path.join(record_dir, f"frame_{view['frame']:06d}.png"), frame)

        try:
            reset = _check(await client.post(f"/envs/{env_id}/reset"))
            view = reset["state_view"]
            start_frame = view["frame"]
            await maybe_dump(view)
            maybe_record(reset, view)
            done = False
            while not done and view["frame"] - start_frame < args.max_frames:
                payload = _check(await client.post(f"/envs/{env_id}/step", json={}))
                view = payload["state_view"]
                done = payload["done"]
                await maybe_dump(view)
                maybe_record(payload, view)
            print(
                f"played {view['frame'] - start_frame} frames: score {view['score']}, "
                f"lives {view['lives']}, lifecycle {view['lifecycle']}"
                + (" (episode done)" if done else "")
            )
            if args.dump_state and not dumped:
                print(
                    f"warning: --at-frame {args.at_frame} was never reached; no state dumped",
                    file=sys.stderr,
                )
        finally:
            await client.delete(f"/envs/{env_id}")
    return 0


async def _cmd_validate(args) -> int:
    with open(args.document, encoding="utf-8") as fh:
        text = fh.read()
    async with _client(args.server) as client:
        payload = _check(await client.post("/state/validate", json={"document": text}))
    if payload["valid"]:
        print(f"{args.document}: valid")
        return 0
    print(f"{args.document}: INVALID ({payload['error']})")
    return 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("toybox.service.app:app", host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toybox",
        description="Deterministic Breakout: play, intervene, and run behavioral test suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p):
        p.add_argument(
            "--server",
            default=None,
            help="service URL; defaults to an in-process service instance",
        )

    run = sub.add_parser("run", help="run a behavioral suite against an agent")
    run.add_argument("--suite", required=True, choices=["r1", "r2", "r3"])
    run.add_argument("--agent", required=True, help="agent name (random, tracker, replay)")
    run.add_argument("--agent-param", action="append", metavar="KEY=VALUE")
    run.add_argument("--trials", type=int, default=30)
    run.add_argument("--budget-frames", type=int, default=14400)
    run.add_argument("--frame-skip", type=int, default=4)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", required=True, help="directory for result tables")
    run.add_argument("--angles", default=None, help="comma-separated degrees (R2 only)")
    run.add_argument("--config", default=None, help="path to a JSON game config")
    run.add_argument("--parallel", type=int, default=0, help="worker threads (0 = serial)")
    run.add_argument("--formats", default="csv,json")
    run.add_argument("--gate", action="store_true", help="exit non-zero unless all cases pass")
    run.add_argument("--gate-threshold", type=float, default=1.0)
    add_server(run)

    play = sub.add_parser("play", help="drive one episode with a named agent")
    play.add_argument("--agent", default="tracker")
    play.add_argument("--agent-param", action="append", metavar="KEY=VALUE")
    play.add_argument("--load-state", default=None, help="start from a state document")
    play.add_argument("--config", default=None, help="path to a JSON game config")
    play.add_argument("--frame-skip", type=int, default=4)
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--max-frames", type=int, default=14400)
    play.add_argument(
        "--episode-policy",
        default="standard",
        choices=["standard", "single_life_single_level"],
    )
    play.add_argument("--dump-state", default=None, help="write a state document to this path")
    play.add_argument(
        "--at-frame", type=int, default=0, help="frame at (or after) which to dump state"
    )
    play.add_argument("--record-frames", default=None, help="write one PNG per step here")
    add_server(play)

    validate = sub.add_parser("validate", help="validate a state document")
    validate.add_argument("document", help="path to a state document")
    add_server(validate)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8461)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    handler = {"run": _cmd_run, "play": _cmd_play, "validate": _cmd_validate}[args.command]
    return asyncio.run(handler(args))


if __name__ == "__main__":
    sys.exit(main())
