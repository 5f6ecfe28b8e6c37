"""Generate the page of next-to-minimal weight tables."""

import mkdocs_gen_files

from prm_weights.harness import run_tables
from prm_weights.render import table_markdown

# Field order, largest dimension listed.
TABLES = ((2, 5), (3, 4), (4, 3), (5, 3))

with mkdocs_gen_files.open("tables.md", "w") as fd:
    fd.write("# Tables\n\n")
    fd.write("Closed-form values only; run `prm-weights tables --oracle-dim` to check them by enumeration.\n\n")
    for q, n_max in TABLES:
        fd.write(table_markdown(run_tables(q, n_max)).replace("## ", "### ").replace("### Next", "## Next", 1))
        fd.write("\n")
