import csv
import json


def write_rows(rows, stream, columns):
    """CSV with a header line; missing keys are left blank."""
    writer = csv.DictWriter(stream, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def write_run_report(report, stream):
    """
    One 'step node inc est_active' line per pick, then a '# summary' line
    holding the remaining report fields as JSON.
    """
    stream.write("step node inc est_active\n")
    for step in report.steps:
        stream.write(f"{step.step} {step.label} {step.inc:g} {step.est_active}\n")
    summary = report.model_dump(mode="json", exclude={"steps"})
    stream.write(f"# summary {json.dumps(summary, sort_keys=True)}\n")


def write_ranking(ranking, graph, stream):
    """'rank node score' lines, rank starting at 1; score is blank when unscored."""
    for rank, v in enumerate(ranking.order.tolist(), start=1):
        score = "" if ranking.scores is None else f"{ranking.scores[v]:.10g}"
        stream.write(f"{rank} {graph.label(v)} {score}".rstrip() + "\n")
