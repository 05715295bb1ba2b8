#!/usr/bin/env python3
"""
Run plnr jobs in parallel subprocesses, one per entry of a JSON job list.

The job list is an array of {"name": ..., "args": ["planar-search", "--field", "3^4", ...]}.

Usage:
    python plnr-batch.py -i jobs.json -o ./output -j 4

Resume a previous run, skipping jobs whose report.json already exists:
    python plnr-batch.py -i jobs.json -o ./output --resume
"""

import argparse
import concurrent.futures
import json
import shutil
import subprocess
import sys
from pathlib import Path


_EXIT_STAGE: dict[int, str] = {
    0: "ran",
    1: "usage_error",
    2: "internal_error",
}

_STAGE_ABBREV: dict[str, str] = {
    "ran":            "r",
    "usage_error":    "ue",
    "internal_error": "ie",
    "timeout":        "to",
    "unknown":        "u",
}

def _abbrev(stage: str) -> str:
    if stage in _STAGE_ABBREV:
        return _STAGE_ABBREV[stage]
    if stage.startswith("error:") or stage.startswith("exception:"):
        return "err"
    return stage[:4]


def _verdict(report: dict) -> bool | None:
    result = report.get("result", {})
    for key in ("ok", "planar", "negabent", "bent", "valid", "passed"):
        if isinstance(result.get(key), bool):
            return result[key]
    return None


def _read_report(job_output: Path) -> dict | None:
    report_path = job_output / "report.json"
    if not report_path.exists():
        return None
    try:
        with open(report_path) as f:
            return json.load(f)
    except Exception:
        return None


def existing_result(name: str, output_dir: Path) -> dict | None:
    """Build a result dict from a previous run's report, or None if there is no prior run."""
    job_output = output_dir / name
    report = _read_report(job_output)
    if report is None:
        return None
    return {
        "name": name,
        "output_dir": str(job_output),
        "stage": "ran",
        "verdict": _verdict(report),
        "skipped": True,
    }


def run_single(job: dict, output_dir: Path, timeout: int) -> dict:
    name = job["name"]
    job_output = output_dir / name
    # Start each (re-)run from a clean slate.
    if job_output.exists():
        shutil.rmtree(job_output, ignore_errors=True)
    job_output.mkdir(parents=True, exist_ok=True)

    cmd = [sys.executable, "-m", "plnr", *job["args"], "--report", str(job_output / "report.json")]
    result: dict = {"name": name, "output_dir": str(job_output), "stage": "unknown"}

    log_path = job_output / "plnr.log"
    try:
        with subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True) as proc:
            try:
                stdout, stderr = proc.communicate(timeout=timeout)
            except subprocess.TimeoutExpired:
                proc.kill()
                stdout, stderr = proc.communicate()
                result["stage"] = "timeout"
            else:
                result["returncode"] = proc.returncode
                result["stage"] = _EXIT_STAGE.get(proc.returncode, "unknown")
            result["log_path"] = str(log_path)
            log_path.write_text(stderr, errors="replace")
    except Exception as e:
        result["stage"] = f"error: {e}"
        return result

    report = _read_report(job_output)
    if report is not None:
        result["verdict"] = _verdict(report)
        result["elapsed"] = report.get("elapsed")
    return result


def _load_jobs(path: Path) -> list[dict]:
    with open(path) as f:
        jobs = json.load(f)
    if not isinstance(jobs, list):
        raise ValueError(f"{path} must hold a JSON array of jobs")
    names = set()
    for job in jobs:
        if not isinstance(job, dict) or "name" not in job or not isinstance(job.get("args"), list):
            raise ValueError(f"Job {job!r} needs a name and an args list")
        if job["name"] in names:
            raise ValueError(f"Duplicate job name '{job['name']}'")
        names.add(job["name"])
    return jobs


def main():
    parser = argparse.ArgumentParser(description="Batch-run plnr jobs from a JSON job list.")
    parser.add_argument("-i", "--input",  required=True,      help="JSON file with the job list")
    parser.add_argument("-o", "--output", default="./output", help="Root output directory")
    parser.add_argument("-j", "--jobs",   type=int, default=4, help="Max parallel processes")
    parser.add_argument("--timeout",      type=int, default=3600, help="Per-job timeout in seconds")
    parser.add_argument("--resume", action="store_true",
                        help="Reuse an existing output directory: skip jobs that already have a report.")
    args = parser.parse_args()

    input_path = Path(args.input)
    output_dir = Path(args.output)

    if not input_path.is_file():
        print(f"error: {input_path} is not a file", file=sys.stderr)
        sys.exit(1)
    try:
        jobs = _load_jobs(input_path)
    except (ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)
    if not jobs:
        print(f"error: no jobs in {input_path}", file=sys.stderr)
        sys.exit(1)

    output_dir.mkdir(parents=True, exist_ok=True)

    skipped_results: list[dict] = []
    to_run: list[dict] = []
    for job in jobs:
        prev = existing_result(job["name"], output_dir) if args.resume else None
        if prev is not None:
            skipped_results.append(prev)
        else:
            to_run.append(job)

    total_jobs = len(jobs)
    if args.resume:
        print(f"Resume: {total_jobs} job(s), skipping {len(skipped_results)} with reports, "
              f"running {len(to_run)} with {args.jobs} parallel processes...\n")
    else:
        print(f"Running {total_jobs} job(s) with {args.jobs} parallel processes...\n")

    results: list[dict] = list(skipped_results)
    stage_counts: dict[str, int] = {}
    for r in skipped_results:
        ab = _abbrev(r["stage"])
        stage_counts[ab] = stage_counts.get(ab, 0) + 1
        print(f"  [{'skip':16s}]  {r['name']:50s}  (cached)  [{len(results)}/{total_jobs}]")

    with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = {pool.submit(run_single, job, output_dir, args.timeout): job for job in to_run}
        for future in concurrent.futures.as_completed(futures):
            job = futures[future]
            try:
                result = future.result()
            except Exception as e:
                result = {"name": job["name"], "stage": f"exception: {e}"}
            results.append(result)
            rc = result.get("returncode", "?")
            stage = result.get("stage", "unknown")
            verdict = result.get("verdict")
            ab = _abbrev(stage)
            stage_counts[ab] = stage_counts.get(ab, 0) + 1
            counters = "  ".join(f"{s}:{n}" for s, n in sorted(stage_counts.items()))
            print(f"  [{stage:16s}]  {result['name']:50s}  (rc={rc}, verdict={verdict})  "
                  f"[{len(results)}/{total_jobs} | {counters}]")

    total = len(results)
    ran = sum(1 for r in results if r.get("stage") == "ran")
    positive = sum(1 for r in results if r.get("verdict") is True)

    print(f"\n{'='*60}")
    print(f"Done:  {total} job(s)  |  ran: {ran}  |  true verdicts: {positive}  |  failed: {total - ran}")
    if args.resume:
        print(f"       ({len(skipped_results)} skipped, {len(to_run)} run)")

    summary_path = output_dir / "summary.json"
    with open(summary_path, "w") as f:
        json.dump(sorted(results, key=lambda r: r["name"]), f, indent=2, default=str)
    print(f"Summary → {summary_path}")


if __name__ == "__main__":
    main()
