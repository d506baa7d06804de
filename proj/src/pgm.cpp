#include "featurex/pgm.hpp"

#include <fstream>

#include "featurex/errors.hpp"

namespace featurex {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comment lines.
int read_header_int(std::istream& in, const std::filesystem::path& path) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw FormatError("truncated PGM header: " + path.string());
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    long value = 0;
    if (!(in >> value) || value < 0) throw FormatError("bad PGM header value: " + path.string());
    return static_cast<int>(value);
}

struct Raster {
    int width = 0, height = 0, maxval = 0;
    std::vector<uint16_t> samples;
};

Raster read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P') throw FormatError("not a PNM file: " + path.string());
    if (m1 != '5') {
        // P6 is color, P2/P3 ascii; none are supported grayscale rasters.
        throw FormatError(std::string("unsupported PNM magic P") + m1 + ": " + path.string());
    }

    Raster r;
    r.width = read_header_int(in, path);
    r.height = read_header_int(in, path);
    r.maxval = read_header_int(in, path);
    if (r.width < 1 || r.height < 1) throw FormatError("bad PGM dimensions: " + path.string());
    if (r.maxval < 1 || r.maxval > 65535) throw FormatError("bad PGM maxval: " + path.string());

    // Exactly one whitespace byte separates maxval from the samples.
    int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) throw FormatError("bad PGM header end: " + path.string());

    const size_t n = static_cast<size_t>(r.width) * r.height;
    const bool wide = r.maxval >= 256;
    std::vector<unsigned char> buf(n * (wide ? 2 : 1));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<size_t>(in.gcount()) != buf.size())
        throw FormatError("truncated PGM payload: " + path.string());

    r.samples.resize(n);
    if (wide) {
        for (size_t i = 0; i < n; ++i)
            r.samples[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
    } else {
        for (size_t i = 0; i < n; ++i) r.samples[i] = buf[i];
    }
    for (uint16_t v : r.samples)
        if (v > r.maxval) throw FormatError("PGM sample exceeds maxval: " + path.string());
    return r;
}

} // namespace

IntensityImage load_intensity(const std::filesystem::path& path) {
    Raster r = read_pgm(path);
    IntensityImage img;
    img.width = r.width;
    img.height = r.height;
    img.bit_depth = r.maxval < 256 ? 8 : 16;
    img.pixels = std::move(r.samples);
    return img;
}

LabelMask load_mask(const std::filesystem::path& path) {
    Raster r = read_pgm(path);
    LabelMask mask;
    mask.width = r.width;
    mask.height = r.height;
    mask.labels = std::move(r.samples);
    return mask;
}

void write_pgm(const std::filesystem::path& path, int width, int height, int maxval,
               const std::vector<uint16_t>& samples) {
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw FormatError("bad PGM write parameters: " + path.string());
    if (samples.size() != static_cast<size_t>(width) * height)
        throw FormatError("sample count mismatch: " + path.string());

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path.string());
    out << "P5\n" << width << " " << height << "\n" << maxval << "\n";
    if (maxval >= 256) {
        for (uint16_t v : samples) {
            unsigned char b[2] = {static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v & 0xff)};
            out.write(reinterpret_cast<char*>(b), 2);
        }
    } else {
        for (uint16_t v : samples) {
            unsigned char b = static_cast<unsigned char>(v);
            out.write(reinterpret_cast<char*>(&b), 1);
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_intensity(const std::filesystem::path& path, const IntensityImage& image) {
    write_pgm(path, image.width, image.height, image.bit_depth == 8 ? 255 : 65535, image.pixels);
}

void write_mask(const std::filesystem::path& path, const LabelMask& mask) {
    uint16_t maxlabel = 0;
    for (uint16_t v : mask.labels) maxlabel = std::max(maxlabel, v);
    write_pgm(path, mask.width, mask.height, maxlabel < 256 ? 255 : 65535, mask.labels);
}

} // namespace featurex
