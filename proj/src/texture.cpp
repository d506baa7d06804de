#include "featurex/texture.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "featurex/errors.hpp"

namespace featurex {

namespace {

// Scan displacement per Haralick angle (y axis points down, so 45/135
// point toward the upper corners).
void angle_offset(int angle, int d, int& dx, int& dy) {
    switch (angle) {
        case 0: dx = d; dy = 0; break;
        case 45: dx = d; dy = -d; break;
        case 90: dx = 0; dy = -d; break;
        case 135: dx = -d; dy = -d; break;
        default: throw ConfigError("unsupported angle " + std::to_string(angle));
    }
}

double log2_safe(double p) { return p > 0 ? std::log2(p) : 0.0; }

} // namespace

DiscretizedRoi discretize(const PixelCloud& cloud, int ng) {
    if (ng < 2) throw ConfigError("grey level count must be >= 2");
    DiscretizedRoi roi;
    roi.ng = ng;
    roi.x0 = static_cast<int>(cloud.bbox.x_min);
    roi.y0 = static_cast<int>(cloud.bbox.y_min);
    roi.width = cloud.bbox.width();
    roi.height = cloud.bbox.height();
    roi.grid.assign(static_cast<size_t>(roi.width) * roi.height, -1);
    roi.roi_pixels = cloud.pixels.size();
    if (cloud.pixels.empty()) return roi;

    uint16_t lo = cloud.pixels[0].intensity, hi = lo;
    for (const Pixel& p : cloud.pixels) {
        lo = std::min(lo, p.intensity);
        hi = std::max(hi, p.intensity);
    }
    const double span = static_cast<double>(hi) - lo + 1.0;
    for (const Pixel& p : cloud.pixels) {
        int level = 0;
        if (hi > lo)
            level = std::min(ng - 1, static_cast<int>(static_cast<double>(ng) *
                                                      (p.intensity - lo) / span));
        roi.grid[static_cast<size_t>(static_cast<int>(p.y) - roi.y0) * roi.width +
                 (static_cast<int>(p.x) - roi.x0)] = static_cast<int16_t>(level);
    }
    return roi;
}

GlcmMatrix glcm(const DiscretizedRoi& roi, int offset, int angle, bool symmetric) {
    GlcmMatrix m;
    m.ng = roi.ng;
    m.angle = angle;
    m.p.assign(static_cast<size_t>(roi.ng) * roi.ng, 0.0);

    int dx = 0, dy = 0;
    angle_offset(angle, offset, dx, dy);

    std::vector<uint64_t> counts(m.p.size(), 0);
    for (int y = 0; y < roi.height; ++y) {
        for (int x = 0; x < roi.width; ++x) {
            const int16_t a = roi.inside(x, y) ? roi.level(x, y) : int16_t(-1);
            if (a < 0) continue;
            const int nx = x + dx, ny = y + dy;
            if (!roi.inside(nx, ny)) continue;
            const int16_t b = roi.level(nx, ny);
            counts[static_cast<size_t>(a) * roi.ng + b] += 1;
            if (symmetric) counts[static_cast<size_t>(b) * roi.ng + a] += 1;
            m.pair_count += 1;
        }
    }
    if (m.pair_count == 0) return m;
    const double total = symmetric ? 2.0 * static_cast<double>(m.pair_count)
                                   : static_cast<double>(m.pair_count);
    for (size_t i = 0; i < counts.size(); ++i) m.p[i] = static_cast<double>(counts[i]) / total;
    return m;
}

NamedValues glcm_features(const GlcmMatrix& m) {
    const auto& names = glcm_feature_names();
    NamedValues out;
    out.reserve(names.size());
    if (m.pair_count == 0) {
        for (const auto& n : names) out.push_back({n, 0.0});
        return out;
    }

    const int ng = m.ng;
    // Grey values are 1-based (g = level + 1) in all weight-bearing sums.
    std::vector<double> px(ng, 0.0), py(ng, 0.0);
    std::vector<double> pxy(2 * ng - 1, 0.0);  // p_{x+y}, index = i+j-2
    std::vector<double> pxmy(ng, 0.0);         // p_{x-y}, index = |i-j|
    double asm_ = 0, contrast = 0, entropy = 0, idm = 0, id = 0, idn = 0, idmn = 0;
    double iv = 0, dis = 0, acor = 0, jmax = 0;
    for (int a = 0; a < ng; ++a) {
        for (int b = 0; b < ng; ++b) {
            const double p = m.at(a, b);
            if (p == 0) continue;
            const double i = a + 1, j = b + 1;
            const double diff = i - j;
            px[a] += p;
            py[b] += p;
            pxy[a + b] += p;
            pxmy[std::abs(a - b)] += p;
            asm_ += p * p;
            contrast += diff * diff * p;
            entropy -= p * std::log2(p);
            idm += p / (1.0 + diff * diff);
            id += p / (1.0 + std::abs(diff));
            idn += p / (1.0 + std::abs(diff) / ng);
            idmn += p / (1.0 + diff * diff / (static_cast<double>(ng) * ng));
            if (a != b) iv += p / (diff * diff);
            dis += std::abs(diff) * p;
            acor += i * j * p;
            jmax = std::max(jmax, p);
        }
    }

    double mu_x = 0, mu_y = 0;
    for (int a = 0; a < ng; ++a) {
        mu_x += (a + 1) * px[a];
        mu_y += (a + 1) * py[a];
    }
    double var_x = 0, var_y = 0, hx = 0, hy = 0;
    for (int a = 0; a < ng; ++a) {
        var_x += (a + 1 - mu_x) * (a + 1 - mu_x) * px[a];
        var_y += (a + 1 - mu_y) * (a + 1 - mu_y) * py[a];
        hx -= px[a] * log2_safe(px[a]);
        hy -= py[a] * log2_safe(py[a]);
    }

    double corr = 0;
    if (var_x > 0 && var_y > 0) corr = (acor - mu_x * mu_y) / std::sqrt(var_x * var_y);

    double clutend = 0, clushade = 0, cluprom = 0, jvar = 0;
    double hxy1 = 0, hxy2 = 0;
    for (int a = 0; a < ng; ++a) {
        for (int b = 0; b < ng; ++b) {
            const double p = m.at(a, b);
            const double i = a + 1, j = b + 1;
            const double s = i + j - mu_x - mu_y;
            if (p > 0) {
                clutend += s * s * p;
                clushade += s * s * s * p;
                cluprom += s * s * s * s * p;
                jvar += (i - mu_x) * (i - mu_x) * p;
                hxy1 -= p * log2_safe(px[a] * py[b]);
            }
            if (px[a] > 0 && py[b] > 0) hxy2 -= px[a] * py[b] * std::log2(px[a] * py[b]);
        }
    }

    double sumave = 0, sument = 0;
    for (int k = 0; k < 2 * ng - 1; ++k) {
        const double p = pxy[k];
        if (p == 0) continue;
        sumave += (k + 2) * p;
        sument -= p * std::log2(p);
    }
    double sumvar = 0;
    for (int k = 0; k < 2 * ng - 1; ++k)
        if (pxy[k] > 0) sumvar += (k + 2 - sumave) * (k + 2 - sumave) * pxy[k];

    double difave = 0, difentro = 0;
    for (int k = 0; k < ng; ++k) {
        const double p = pxmy[k];
        if (p == 0) continue;
        difave += k * p;
        difentro -= p * std::log2(p);
    }
    double difvar = 0;
    for (int k = 0; k < ng; ++k)
        if (pxmy[k] > 0) difvar += (k - difave) * (k - difave) * pxmy[k];

    const double hmax = std::max(hx, hy);
    const double infomeas1 = hmax > 0 ? (entropy - hxy1) / hmax : 0.0;
    const double infomeas2 = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - entropy))));

    out.push_back({"asm", asm_});
    out.push_back({"acor", acor});
    out.push_back({"cluprom", cluprom});
    out.push_back({"clushade", clushade});
    out.push_back({"clutend", clutend});
    out.push_back({"contrast", contrast});
    out.push_back({"corr", corr});
    out.push_back({"difave", difave});
    out.push_back({"difentro", difentro});
    out.push_back({"difvar", difvar});
    out.push_back({"dis", dis});
    out.push_back({"energy", std::sqrt(asm_)});
    out.push_back({"entropy", entropy});
    out.push_back({"hom1", id});
    out.push_back({"hom2", idm});
    out.push_back({"id", id});
    out.push_back({"idn", idn});
    out.push_back({"idm", idm});
    out.push_back({"idmn", idmn});
    out.push_back({"infomeas1", infomeas1});
    out.push_back({"infomeas2", infomeas2});
    out.push_back({"iv", iv});
    out.push_back({"jave", mu_x});
    out.push_back({"je", entropy});
    out.push_back({"jmax", jmax});
    out.push_back({"jvar", jvar});
    out.push_back({"sumave", sumave});
    out.push_back({"sument", sument});
    out.push_back({"sumvar", sumvar});
    return out;
}

namespace {

std::vector<GreyCountCell> flatten_cells(std::map<std::pair<int, int>, uint64_t>& acc) {
    std::vector<GreyCountCell> cells;
    cells.reserve(acc.size());
    for (const auto& [key, count] : acc) cells.push_back({key.first, key.second, count});
    return cells;
}

uint64_t lookup_cell(const std::vector<GreyCountCell>& cells, int level, int extent) {
    auto it = std::lower_bound(cells.begin(), cells.end(), std::make_pair(level, extent),
                               [](const GreyCountCell& c, const std::pair<int, int>& k) {
                                   return std::make_pair(c.level, c.extent) < k;
                               });
    if (it != cells.end() && it->level == level && it->extent == extent) return it->count;
    return 0;
}

} // namespace

uint64_t RunLengthMatrix::at(int g, int l) const { return lookup_cell(cells, g, l); }
uint64_t SizeZoneMatrix::at(int g, int size) const { return lookup_cell(cells, g, size); }

RunLengthMatrix glrlm(const DiscretizedRoi& roi, int angle) {
    RunLengthMatrix m;
    m.ng = roi.ng;
    m.angle = angle;
    m.roi_pixels = roi.roi_pixels;

    // Scan direction; runs are direction-symmetric so 90/135 use the
    // downward-pointing equivalents.
    int dx = 0, dy = 0;
    switch (angle) {
        case 0: dx = 1; dy = 0; break;
        case 45: dx = 1; dy = -1; break;
        case 90: dx = 0; dy = 1; break;
        case 135: dx = 1; dy = 1; break;
        default: throw ConfigError("unsupported angle " + std::to_string(angle));
    }

    std::map<std::pair<int, int>, uint64_t> acc;
    for (int y = 0; y < roi.height; ++y) {
        for (int x = 0; x < roi.width; ++x) {
            if (!roi.inside(x, y)) continue;
            const int16_t g = roi.level(x, y);
            // Run start: predecessor along the scan line is outside or differs.
            const int px_ = x - dx, py_ = y - dy;
            if (roi.inside(px_, py_) && roi.level(px_, py_) == g) continue;
            int len = 1;
            int nx = x + dx, ny = y + dy;
            while (roi.inside(nx, ny) && roi.level(nx, ny) == g) {
                ++len;
                nx += dx;
                ny += dy;
            }
            acc[{g, len}] += 1;
            m.total_runs += 1;
        }
    }
    m.cells = flatten_cells(acc);
    return m;
}

NamedValues glrlm_features(const RunLengthMatrix& m) {
    const auto& names = glrlm_feature_names();
    NamedValues out;
    out.reserve(names.size());
    if (m.total_runs == 0) {
        for (const auto& n : names) out.push_back({n, 0.0});
        return out;
    }
    const double nr = static_cast<double>(m.total_runs);
    const double np = static_cast<double>(m.roi_pixels);

    double sre = 0, lre = 0, lglre = 0, hglre = 0, srlgle = 0, srhgle = 0, lrlgle = 0,
           lrhgle = 0, re = 0, glv = 0, rv = 0;
    std::map<int, double> per_level, per_len;
    double mu_g = 0, mu_l = 0;
    for (const GreyCountCell& cell : m.cells) {
        const double r = static_cast<double>(cell.count);
        const double g = cell.level + 1;
        const double l = cell.extent;
        sre += r / (l * l);
        lre += r * l * l;
        lglre += r / (g * g);
        hglre += r * g * g;
        srlgle += r / (g * g * l * l);
        srhgle += r * g * g / (l * l);
        lrlgle += r * l * l / (g * g);
        lrhgle += r * g * g * l * l;
        per_level[cell.level] += r;
        per_len[cell.extent] += r;
        const double p = r / nr;
        re -= p * std::log2(p);
        mu_g += p * g;
        mu_l += p * l;
    }
    for (const GreyCountCell& cell : m.cells) {
        const double p = static_cast<double>(cell.count) / nr;
        glv += p * (cell.level + 1 - mu_g) * (cell.level + 1 - mu_g);
        rv += p * (cell.extent - mu_l) * (cell.extent - mu_l);
    }
    double glnu = 0, rlnu = 0;
    for (const auto& [lv, s] : per_level) glnu += s * s;
    for (const auto& [len, s] : per_len) rlnu += s * s;

    out.push_back({"sre", sre / nr});
    out.push_back({"lre", lre / nr});
    out.push_back({"glnu", glnu / nr});
    out.push_back({"glnun", glnu / (nr * nr)});
    out.push_back({"rlnu", rlnu / nr});
    out.push_back({"rlnun", rlnu / (nr * nr)});
    out.push_back({"rp", nr / np});
    out.push_back({"glv", glv});
    out.push_back({"rv", rv});
    out.push_back({"re", re});
    out.push_back({"lglre", lglre / nr});
    out.push_back({"hglre", hglre / nr});
    out.push_back({"srlgle", srlgle / nr});
    out.push_back({"srhgle", srhgle / nr});
    out.push_back({"lrlgle", lrlgle / nr});
    out.push_back({"lrhgle", lrhgle / nr});
    return out;
}

SizeZoneMatrix glszm(const DiscretizedRoi& roi) {
    SizeZoneMatrix m;
    m.ng = roi.ng;
    m.roi_pixels = roi.roi_pixels;

    std::map<std::pair<int, int>, uint64_t> acc;
    std::vector<uint8_t> seen(static_cast<size_t>(roi.width) * roi.height, 0);
    std::vector<std::pair<int, int>> stack;
    constexpr int k8[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int y = 0; y < roi.height; ++y) {
        for (int x = 0; x < roi.width; ++x) {
            if (!roi.inside(x, y) || seen[static_cast<size_t>(y) * roi.width + x]) continue;
            const int16_t g = roi.level(x, y);
            int size = 0;
            stack.push_back({x, y});
            seen[static_cast<size_t>(y) * roi.width + x] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++size;
                for (const auto& d : k8) {
                    const int nx = cx + d[0], ny = cy + d[1];
                    if (!roi.inside(nx, ny) || roi.level(nx, ny) != g) continue;
                    uint8_t& s = seen[static_cast<size_t>(ny) * roi.width + nx];
                    if (!s) {
                        s = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
            acc[{g, size}] += 1;
            m.total_zones += 1;
        }
    }
    m.cells = flatten_cells(acc);
    return m;
}

NamedValues glszm_features(const SizeZoneMatrix& m) {
    const auto& names = glszm_feature_names();
    NamedValues out;
    out.reserve(names.size());
    if (m.total_zones == 0) {
        for (const auto& n : names) out.push_back({n, 0.0});
        return out;
    }
    const double nz = static_cast<double>(m.total_zones);
    const double np = static_cast<double>(m.roi_pixels);

    double sae = 0, lae = 0, lglze = 0, hglze = 0, salgle = 0, sahgle = 0, lalgle = 0,
           lahgle = 0, ze = 0, glv = 0, zv = 0;
    std::map<int, double> per_level, per_size;
    double mu_g = 0, mu_s = 0;
    for (const GreyCountCell& cell : m.cells) {
        const double s = static_cast<double>(cell.count);
        const double g = cell.level + 1;
        const double z = cell.extent;
        sae += s / (z * z);
        lae += s * z * z;
        lglze += s / (g * g);
        hglze += s * g * g;
        salgle += s / (g * g * z * z);
        sahgle += s * g * g / (z * z);
        lalgle += s * z * z / (g * g);
        lahgle += s * g * g * z * z;
        per_level[cell.level] += s;
        per_size[cell.extent] += s;
        const double p = s / nz;
        ze -= p * std::log2(p);
        mu_g += p * g;
        mu_s += p * z;
    }
    for (const GreyCountCell& cell : m.cells) {
        const double p = static_cast<double>(cell.count) / nz;
        glv += p * (cell.level + 1 - mu_g) * (cell.level + 1 - mu_g);
        zv += p * (cell.extent - mu_s) * (cell.extent - mu_s);
    }
    double glnu = 0, sznu = 0;
    for (const auto& [lv, s] : per_level) glnu += s * s;
    for (const auto& [sz, s] : per_size) sznu += s * s;

    out.push_back({"sae", sae / nz});
    out.push_back({"lae", lae / nz});
    out.push_back({"glnu", glnu / nz});
    out.push_back({"glnun", glnu / (nz * nz)});
    out.push_back({"sznu", sznu / nz});
    out.push_back({"sznun", sznu / (nz * nz)});
    out.push_back({"zp", nz / np});
    out.push_back({"glv", glv});
    out.push_back({"zv", zv});
    out.push_back({"ze", ze});
    out.push_back({"lglze", lglze / nz});
    out.push_back({"hglze", hglze / nz});
    out.push_back({"salgle", salgle / nz});
    out.push_back({"sahgle", sahgle / nz});
    out.push_back({"lalgle", lalgle / nz});
    out.push_back({"lahgle", lahgle / nz});
    return out;
}

NgtdmTable ngtdm(const DiscretizedRoi& roi) {
    NgtdmTable t;
    t.ng = roi.ng;
    t.n.assign(roi.ng, 0);
    t.s.assign(roi.ng, 0.0);

    for (int y = 0; y < roi.height; ++y) {
        for (int x = 0; x < roi.width; ++x) {
            if (!roi.inside(x, y)) continue;
            double sum = 0;
            int count = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (roi.inside(x + dx, y + dy)) {
                        sum += roi.level(x + dx, y + dy) + 1; // 1-based grey value
                        ++count;
                    }
                }
            }
            if (count == 0) continue; // isolated pixel: no valid neighborhood
            const int16_t g = roi.level(x, y);
            t.n[g] += 1;
            t.s[g] += std::abs((g + 1) - sum / count);
            t.valid_pixels += 1;
        }
    }
    return t;
}

NamedValues ngtdm_features(const NgtdmTable& t) {
    const auto& names = ngtdm_feature_names();
    NamedValues out;
    out.reserve(names.size());
    if (t.valid_pixels == 0) {
        for (const auto& n : names) out.push_back({n, 0.0});
        return out;
    }
    const double nv = static_cast<double>(t.valid_pixels);
    std::vector<double> p(t.ng, 0.0);
    int levels_present = 0;
    double s_total = 0, ps_total = 0;
    for (int i = 0; i < t.ng; ++i) {
        p[i] = static_cast<double>(t.n[i]) / nv;
        if (p[i] > 0) ++levels_present;
        s_total += t.s[i];
        ps_total += p[i] * t.s[i];
    }

    constexpr double kCoarsenessCap = 1e6;
    const double coarseness = ps_total > 0 ? 1.0 / ps_total : kCoarsenessCap;

    double contrast = 0;
    if (levels_present > 1) {
        double acc = 0;
        for (int i = 0; i < t.ng; ++i) {
            if (p[i] == 0) continue;
            for (int j = 0; j < t.ng; ++j) {
                if (p[j] == 0) continue;
                acc += p[i] * p[j] * (i - j) * (i - j);
            }
        }
        contrast = acc / (static_cast<double>(levels_present) * (levels_present - 1)) *
                   (s_total / nv);
    }

    double busy_den = 0, complexity = 0, strength_num = 0;
    for (int i = 0; i < t.ng; ++i) {
        if (p[i] == 0) continue;
        const double gi = i + 1;
        for (int j = 0; j < t.ng; ++j) {
            if (p[j] == 0) continue;
            const double gj = j + 1;
            busy_den += std::abs(gi * p[i] - gj * p[j]);
            complexity += std::abs(gi - gj) * (p[i] * t.s[i] + p[j] * t.s[j]) / (p[i] + p[j]);
            strength_num += (p[i] + p[j]) * (gi - gj) * (gi - gj);
        }
    }
    const double busyness = busy_den > 0 ? ps_total / busy_den : 0.0;
    complexity /= nv;
    const double strength = s_total > 0 ? strength_num / s_total : 0.0;

    out.push_back({"busyness", busyness});
    out.push_back({"coarseness", coarseness});
    out.push_back({"complexity", complexity});
    out.push_back({"contrast", contrast});
    out.push_back({"strength", strength});
    return out;
}

const std::vector<std::string>& glcm_feature_names() {
    static const std::vector<std::string> names = {
        "asm",      "acor",      "cluprom", "clushade", "clutend", "contrast", "corr",
        "difave",   "difentro",  "difvar",  "dis",      "energy",  "entropy",  "hom1",
        "hom2",     "id",        "idn",     "idm",      "idmn",    "infomeas1",
        "infomeas2", "iv",       "jave",    "je",       "jmax",    "jvar",     "sumave",
        "sument",   "sumvar"};
    return names;
}

const std::vector<std::string>& glrlm_feature_names() {
    static const std::vector<std::string> names = {
        "sre",  "lre",  "glnu",   "glnun",  "rlnu",   "rlnun",  "rp",     "glv",
        "rv",   "re",   "lglre",  "hglre",  "srlgle", "srhgle", "lrlgle", "lrhgle"};
    return names;
}

const std::vector<std::string>& glszm_feature_names() {
    static const std::vector<std::string> names = {
        "sae",  "lae",  "glnu",   "glnun",  "sznu",   "sznun",  "zp",     "glv",
        "zv",   "ze",   "lglze",  "hglze",  "salgle", "sahgle", "lalgle", "lahgle"};
    return names;
}

const std::vector<std::string>& ngtdm_feature_names() {
    static const std::vector<std::string> names = {"busyness", "coarseness", "complexity",
                                                   "contrast", "strength"};
    return names;
}

} // namespace featurex
