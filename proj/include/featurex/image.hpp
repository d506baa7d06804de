#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace featurex {

// Grayscale raster, row-major. 8-bit inputs are widened to the uint16
// value domain on load so all feature code handles a single domain.
struct IntensityImage {
    int width = 0;
    int height = 0;
    int bit_depth = 16; // 8 or 16
    std::vector<uint16_t> pixels;

    uint16_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

// Integer label raster paired with an IntensityImage. Label 0 is background.
struct LabelMask {
    int width = 0;
    int height = 0;
    std::vector<uint16_t> labels;

    uint16_t at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
};

// Read-only view of a horizontal band of a matched image/mask pair.
struct RowTile {
    int y0 = 0;
    int rows = 0;
    int width = 0;
    std::span<const uint16_t> intensity; // rows*width values
    std::span<const uint16_t> labels;
};

// Partitions [0, height) into contiguous tiles of at most rows_per_tile rows.
// Throws PairingError on dimension mismatch.
std::vector<RowTile> iter_row_tiles(const IntensityImage& image, const LabelMask& mask,
                                    int rows_per_tile = 256);

} // namespace featurex
