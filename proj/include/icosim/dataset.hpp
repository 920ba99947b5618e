#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "icosim/rng.hpp"

namespace icosim {

struct AxisBounds {
    double lo = 0.0;
    double hi = 0.0;

    double max_abs() const;
    double midpoint() const { return 0.5 * (lo + hi); }
};

/// Earth-surface field ranges in nT, sampled component-wise uniform.
struct FieldBounds {
    AxisBounds bx{-43000.0, 43000.0};
    AxisBounds by{-18000.0, 17000.0};
    AxisBounds bz{-67000.0, 62000.0};

    void validate() const;
    const AxisBounds& axis(int i) const;
};

/// The heading formula is read verbatim as 2*atan2(Bx, By); the swapped
/// argument order is kept switchable because the conventional reading is
/// atan2(y, x).
enum class HeadingConvention { atan2_bx_by, atan2_by_bx };

const char* heading_convention_name(HeadingConvention c);
HeadingConvention heading_convention_from_name(const std::string& name);

struct Sample {
    std::array<double, 3> b_raw{};  // (Bx, By, Bz) in nT
    std::array<double, 3> x_norm{}; // rotation angles, each in [-pi, pi]
    double y_raw_deg = 0.0;         // heading, (-360, 360]
    double y_norm = 0.0;            // training target, [-1, 1]
};

struct DatasetConfig {
    std::uint64_t seed = 7;
    int k_train = 200;
    int k_test = 50;
    FieldBounds bounds;
    HeadingConvention convention = HeadingConvention::atan2_bx_by;

    void validate() const;
};

struct Dataset {
    std::vector<Sample> train;
    std::vector<Sample> test;
    DatasetConfig config;
};

/// One field triple, each component uniform strictly inside its interval.
std::array<double, 3> sample_field(Rng& rng, const FieldBounds& bounds);

/// 2*atan2(. , .) converted to degrees, range (-360, 360]. DomainError when
/// the horizontal components are both zero.
double heading_degrees(const std::array<double, 3>& b,
                       HeadingConvention convention = HeadingConvention::atan2_bx_by);

/// x_i = pi * B_i / max_abs(axis_i); linear, odd, each component in
/// [-pi, pi]. DomainError outside the declared bounds.
std::array<double, 3> normalize_input(const std::array<double, 3>& b,
                                      const FieldBounds& bounds);

/// y / 360, mapping (-360, 360] into (-1, 1].
double normalize_target(double y_deg);

Sample make_sample(const std::array<double, 3>& b, const FieldBounds& bounds,
                   HeadingConvention convention);

/// Deterministic under config.seed; train drawn first, then test, from one
/// generator stream.
Dataset make_dataset(const DatasetConfig& config);

// File formats: CSV with header `Bx_nT,By_nT,Bz_nT,heading_deg` (raw values,
// full precision; normalized fields are recomputed on load) plus a JSON
// metadata sidecar carrying seed, counts, bounds and normalization constants.
void write_dataset_csv(const std::filesystem::path& path, std::span<const Sample> samples);
std::vector<Sample> read_dataset_csv(const std::filesystem::path& path,
                                     const FieldBounds& bounds,
                                     HeadingConvention convention);
void write_dataset_meta(const std::filesystem::path& path, const DatasetConfig& config);
DatasetConfig read_dataset_meta(const std::filesystem::path& path);

Dataset load_dataset_dir(const std::filesystem::path& dir);

} // namespace icosim
