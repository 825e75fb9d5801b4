import numpy as np
import pytest

from ssmgm.pixelio import DisparityMap

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def motorcycle():
    """Middlebury 2014 Motorcycle (downsampled copy bundled with scikit-image).

    Returns ``(left, right, gt)`` with gray uint8 images and an integer
    ground-truth DisparityMap (unknown pixels invalid).
    """
    skimage_data = pytest.importorskip("skimage.data")
    from skimage.color import rgb2gray

    left, right, disp = skimage_data.stereo_motorcycle()
    to_u8 = lambda im: np.rint(rgb2gray(im) * 255).astype(np.uint8)  # noqa: E731
    known = np.isfinite(disp)
    gt = DisparityMap(np.rint(np.where(known, disp, 0)).astype(np.uint8), known)
    return to_u8(left), to_u8(right), gt


@pytest.fixture(scope="session")
def natural_image():
    skimage_data = pytest.importorskip("skimage.data")
    return skimage_data.camera()[::2, ::2].copy()


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(criterion: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
