import os
import sys


def _ensure_importable():
    """Prefer an installed csgm package; otherwise assemble one from the
    build tree (CSGM_EXT_DIR holds the compiled _core module)."""
    try:
        import csgm  # noqa: F401
        return
    except ImportError:
        pass
    ext_dir = os.environ.get("CSGM_EXT_DIR")
    pkg_dir = os.environ.get("CSGM_PKG_DIR")
    if ext_dir:
        sys.path.insert(0, ext_dir)
    if pkg_dir:
        sys.path.insert(0, pkg_dir)


_ensure_importable()
