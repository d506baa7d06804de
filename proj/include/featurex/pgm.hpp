#pragma once

#include <filesystem>

#include "featurex/image.hpp"

namespace featurex {

// Binary PGM ("P5") reader/writer. Grammar:
//   "P5\n<width> <height>\n<maxval>\n<binary samples>"
// Comment lines starting with '#' are accepted in the header after the magic.
// Samples are 1 byte when maxval < 256, else 2 bytes big-endian. maxval <= 65535.

IntensityImage load_intensity(const std::filesystem::path& path);
LabelMask load_mask(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, int width, int height, int maxval,
               const std::vector<uint16_t>& samples);

void write_intensity(const std::filesystem::path& path, const IntensityImage& image);
void write_mask(const std::filesystem::path& path, const LabelMask& mask);

} // namespace featurex
