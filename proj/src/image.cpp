#include "featurex/image.hpp"

#include "featurex/errors.hpp"

namespace featurex {

std::vector<RowTile> iter_row_tiles(const IntensityImage& image, const LabelMask& mask,
                                    int rows_per_tile) {
    if (image.width != mask.width || image.height != mask.height)
        throw PairingError("image/mask dimension mismatch");
    if (rows_per_tile < 1) throw PairingError("rows_per_tile must be >= 1");

    std::vector<RowTile> tiles;
    for (int y0 = 0; y0 < image.height; y0 += rows_per_tile) {
        RowTile t;
        t.y0 = y0;
        t.rows = std::min(rows_per_tile, image.height - y0);
        t.width = image.width;
        const size_t offset = static_cast<size_t>(y0) * image.width;
        const size_t n = static_cast<size_t>(t.rows) * image.width;
        t.intensity = std::span<const uint16_t>(image.pixels.data() + offset, n);
        t.labels = std::span<const uint16_t>(mask.labels.data() + offset, n);
        tiles.push_back(t);
    }
    return tiles;
}

} // namespace featurex
