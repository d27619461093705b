"""Tab-separated report files. Every report opens with ``#`` lines naming the
seed and config digest so outputs can be traced back to their run."""

from pathlib import Path


def header(title, seed=None, digest=None):
    lines = [f"# botlab {title}"]
    if seed is not None:
        lines.append(f"# seed={seed} config_sha256={digest or '-'}")
    return "\n".join(lines) + "\n"


def write_rows(path, rows, columns, head=""):
    """Write ``rows`` under a ``# col<TAB>col`` line; floats keep full precision."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(head)
        fh.write("# " + "\t".join(columns) + "\n")
        for row in rows:
            fh.write("\t".join(_fmt(x) for x in row) + "\n")
    return Path(path)


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return "-" if x is None else str(x)


def write_stats(path, stats, head=""):
    rows = [(s.layer, s.node_count, s.arc_count, s.mean_out_degree, s.reciprocation, s.gscc_size)
            for s in stats]
    return write_rows(path, rows, ("layer", "nodes", "links", "mean_out_degree", "reciprocation", "gscc_size"),
                      head)
