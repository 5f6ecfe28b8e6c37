"""Generate the API reference pages and their navigation."""

from pathlib import Path

import mkdocs_gen_files

PACKAGE = "prm_weights"

root = Path(__file__).parent.parent
package_dir = root / "src" / PACKAGE
mod_symbol = '<code class="doc-symbol doc-symbol-nav doc-symbol-module"></code>'
nav = mkdocs_gen_files.Nav()

# The package page first, then one page per public module, flat.
modules = [package_dir / "__init__.py"]
modules.extend(path for path in sorted(package_dir.glob("*.py")) if not path.name.startswith("_"))

for path in modules:
    name = PACKAGE if path.stem == "__init__" else f"{PACKAGE}.{path.stem}"
    doc_path = Path("index.md") if path.stem == "__init__" else Path(f"{path.stem}.md")
    nav_key = (f"{mod_symbol} {PACKAGE}",) if path.stem == "__init__" else (f"{mod_symbol} {PACKAGE}", path.stem)
    nav[nav_key] = doc_path.as_posix()
    with mkdocs_gen_files.open(Path("reference", doc_path), "w") as fd:
        fd.write(f"---\ntitle: {name}\n---\n\n::: {name}\n")
    mkdocs_gen_files.set_edit_path(Path("reference", doc_path), ".." / path.relative_to(root))

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
