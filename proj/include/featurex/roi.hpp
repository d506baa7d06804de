#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <vector>

#include "featurex/image.hpp"

namespace featurex {

struct Pixel {
    uint32_t x = 0;
    uint32_t y = 0;
    uint16_t intensity = 0;
};

struct BoundingBox {
    uint32_t x_min = 0, y_min = 0, x_max = 0, y_max = 0; // inclusive

    int width() const { return static_cast<int>(x_max - x_min) + 1; }
    int height() const { return static_cast<int>(y_max - y_min) + 1; }
};

// Sparse per-ROI record of (x, y, intensity) samples. Pixels are stored in
// mask scan order and carry no duplicates; bbox is tight.
struct PixelCloud {
    uint32_t label = 0;
    std::vector<Pixel> pixels;
    BoundingBox bbox;

    size_t count() const { return pixels.size(); }
};

struct MemoryBudget {
    size_t max_resident_bytes = std::numeric_limits<size_t>::max();
    std::filesystem::path spill_dir;
};

// Accumulates per-label pixel clouds in one pass over row tiles. Clouds whose
// resident bytes exceed the budget are spilled to "<spill_dir>/roi_<label>.bin"
// (x:u32, y:u32, intensity:u16, little-endian) and reloaded transparently.
// Eviction picks the largest resident cloud first.
class RoiRegistry {
public:
    RoiRegistry() = default;
    RoiRegistry(RoiRegistry&&) = default;
    RoiRegistry& operator=(RoiRegistry&&) = default;
    RoiRegistry(const RoiRegistry&) = delete;
    RoiRegistry& operator=(const RoiRegistry&) = delete;
    ~RoiRegistry();

    static RoiRegistry accumulate(const std::vector<RowTile>& tiles, const MemoryBudget& budget);

    std::vector<uint32_t> labels() const; // ascending
    size_t roi_count() const { return entries_.size(); }
    bool contains(uint32_t label) const { return entries_.count(label) != 0; }

    // Materializes the full cloud (spilled part first, then resident part,
    // both in scan order). Safe to call concurrently from multiple readers.
    PixelCloud cloud(uint32_t label) const;

    // Peak resident pixel bytes observed right after a tile was folded in,
    // before budget enforcement. Test hook for the budget invariant.
    size_t peak_resident_bytes() const { return peak_resident_bytes_; }

    // Removes spill files. Called automatically on destruction.
    void cleanup();

private:
    struct Entry {
        std::vector<Pixel> resident;
        BoundingBox bbox;
        size_t total = 0;   // total pixel count (resident + spilled)
        size_t spilled = 0; // pixels already written to the spill file
    };

    std::filesystem::path spill_path(uint32_t label) const;
    void spill_entry(uint32_t label, Entry& e);
    void enforce_budget(size_t max_bytes);

    std::map<uint32_t, Entry> entries_;
    std::filesystem::path spill_dir_;
    size_t resident_bytes_ = 0;
    size_t peak_resident_bytes_ = 0;
        bool any_spilled_ = false;
};

} // namespace featurex
