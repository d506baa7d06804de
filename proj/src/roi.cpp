#include "featurex/roi.hpp"

#include <algorithm>
#include <fstream>

#include "featurex/errors.hpp"

namespace featurex {

namespace {

constexpr size_t kSpillRecordBytes = 10; // x:u32 + y:u32 + intensity:u16

void put_u32le(std::ostream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<char*>(b), 4);
}

void put_u16le(std::ostream& out, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    out.write(reinterpret_cast<char*>(b), 2);
}

uint32_t get_u32le(const unsigned char* b) {
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

} // namespace

RoiRegistry::~RoiRegistry() {
    cleanup();
}

std::filesystem::path RoiRegistry::spill_path(uint32_t label) const {
    return spill_dir_ / ("roi_" + std::to_string(label) + ".bin");
}

void RoiRegistry::spill_entry(uint32_t label, Entry& e) {
    if (e.resident.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(spill_dir_, ec);
    std::ofstream out(spill_path(label), std::ios::binary | std::ios::app);
    if (!out) throw SpillIoError("cannot open spill file for label " + std::to_string(label));
    for (const Pixel& p : e.resident) {
        put_u32le(out, p.x);
        put_u32le(out, p.y);
        put_u16le(out, p.intensity);
    }
    if (!out) throw SpillIoError("spill write failed for label " + std::to_string(label));
    e.spilled += e.resident.size();
    resident_bytes_ -= e.resident.size() * sizeof(Pixel);
    e.resident.clear();
    e.resident.shrink_to_fit();
    any_spilled_ = true;
}

void RoiRegistry::enforce_budget(size_t max_bytes) {
    while (resident_bytes_ > max_bytes) {
        // Largest resident cloud first; ties break on smallest label.
        uint32_t victim = 0;
        size_t victim_size = 0;
        for (auto& [label, e] : entries_) {
            if (e.resident.size() > victim_size) {
                victim = label;
                victim_size = e.resident.size();
            }
        }
        if (victim_size == 0) break;
        spill_entry(victim, entries_.at(victim));
    }
}

RoiRegistry RoiRegistry::accumulate(const std::vector<RowTile>& tiles,
                                    const MemoryBudget& budget) {
    RoiRegistry reg;
    reg.spill_dir_ = budget.spill_dir.empty() ? std::filesystem::temp_directory_path()
                                              : budget.spill_dir;

    for (const RowTile& tile : tiles) {
        const uint16_t* labels = tile.labels.data();
        const uint16_t* intensity = tile.intensity.data();
        for (int row = 0; row < tile.rows; ++row) {
            const uint32_t y = static_cast<uint32_t>(tile.y0 + row);
            const size_t base = static_cast<size_t>(row) * tile.width;
            for (int x = 0; x < tile.width; ++x) {
                const uint16_t label = labels[base + x];
                if (label == 0) continue;
                Entry& e = reg.entries_[label];
                const uint32_t ux = static_cast<uint32_t>(x);
                if (e.total == 0) {
                    e.bbox = {ux, y, ux, y};
                } else {
                    e.bbox.x_min = std::min(e.bbox.x_min, ux);
                    e.bbox.x_max = std::max(e.bbox.x_max, ux);
                    e.bbox.y_min = std::min(e.bbox.y_min, y);
                    e.bbox.y_max = std::max(e.bbox.y_max, y);
                }
                e.resident.push_back({ux, y, intensity[base + x]});
                e.total += 1;
                reg.resident_bytes_ += sizeof(Pixel);
            }
        }
        reg.peak_resident_bytes_ = std::max(reg.peak_resident_bytes_, reg.resident_bytes_);
        reg.enforce_budget(budget.max_resident_bytes);
    }
    return reg;
}

std::vector<uint32_t> RoiRegistry::labels() const {
    std::vector<uint32_t> out;
    out.reserve(entries_.size());
    for (const auto& [label, e] : entries_) out.push_back(label);
    return out;
}

PixelCloud RoiRegistry::cloud(uint32_t label) const {
    auto it = entries_.find(label);
    if (it == entries_.end()) throw std::out_of_range("unknown ROI label " + std::to_string(label));
    const Entry& e = it->second;

    PixelCloud c;
    c.label = label;
    c.bbox = e.bbox;
    c.pixels.reserve(e.total);

    if (e.spilled > 0) {
        // Each reader opens its own stream, so concurrent reloads are safe.
        std::ifstream in(spill_path(label), std::ios::binary);
        if (!in) throw SpillIoError("cannot reload spill file for label " + std::to_string(label));
        std::vector<unsigned char> buf(e.spilled * kSpillRecordBytes);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<size_t>(in.gcount()) != buf.size())
            throw SpillIoError("truncated spill file for label " + std::to_string(label));
        for (size_t i = 0; i < e.spilled; ++i) {
            const unsigned char* rec = buf.data() + i * kSpillRecordBytes;
            Pixel p;
            p.x = get_u32le(rec);
            p.y = get_u32le(rec + 4);
            p.intensity = static_cast<uint16_t>(rec[8] | (rec[9] << 8));
            c.pixels.push_back(p);
        }
    }
    c.pixels.insert(c.pixels.end(), e.resident.begin(), e.resident.end());
    return c;
}

void RoiRegistry::cleanup() {
    if (!any_spilled_) return;
    for (const auto& [label, e] : entries_) {
        if (e.spilled > 0) {
            std::error_code ec;
            std::filesystem::remove(spill_path(label), ec);
        }
    }
    any_spilled_ = false;
}

} // namespace featurex
