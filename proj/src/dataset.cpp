#include "icosim/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "icosim/errors.hpp"

namespace icosim {

using nlohmann::json;

double AxisBounds::max_abs() const { return std::max(std::abs(lo), std::abs(hi)); }

void FieldBounds::validate() const {
    for (int i = 0; i < 3; ++i) {
        const AxisBounds& a = axis(i);
        if (!(a.lo < a.hi)) {
            throw ConfigError("field bounds must satisfy lo < hi");
        }
        if (a.max_abs() <= 0.0) {
            throw ConfigError("field bounds must have a positive absolute extent");
        }
    }
}

const AxisBounds& FieldBounds::axis(int i) const {
    switch (i) {
    case 0: return bx;
    case 1: return by;
    case 2: return bz;
    default: throw ConfigError("axis index out of range");
    }
}

const char* heading_convention_name(HeadingConvention c) {
    return c == HeadingConvention::atan2_bx_by ? "atan2_bx_by" : "atan2_by_bx";
}

HeadingConvention heading_convention_from_name(const std::string& name) {
    if (name == "atan2_bx_by") return HeadingConvention::atan2_bx_by;
    if (name == "atan2_by_bx") return HeadingConvention::atan2_by_bx;
    throw ConfigError("unknown heading convention '" + name + "'");
}

void DatasetConfig::validate() const {
    if (k_train < 1 || k_test < 1) {
        throw ConfigError("dataset counts must be >= 1");
    }
    bounds.validate();
}

std::array<double, 3> sample_field(Rng& rng, const FieldBounds& bounds) {
    return {uniform_open(rng, bounds.bx.lo, bounds.bx.hi),
            uniform_open(rng, bounds.by.lo, bounds.by.hi),
            uniform_open(rng, bounds.bz.lo, bounds.bz.hi)};
}

double heading_degrees(const std::array<double, 3>& b, HeadingConvention convention) {
    const double bx = b[0];
    const double by = b[1];
    if (bx == 0.0 && by == 0.0) {
        throw DomainError("heading undefined for zero horizontal field");
    }
    const double angle = convention == HeadingConvention::atan2_bx_by
                             ? std::atan2(bx, by)
                             : std::atan2(by, bx);
    return 2.0 * angle * (180.0 / std::numbers::pi);
}

std::array<double, 3> normalize_input(const std::array<double, 3>& b,
                                      const FieldBounds& bounds) {
    std::array<double, 3> x{};
    for (int i = 0; i < 3; ++i) {
        const AxisBounds& a = bounds.axis(i);
        if (b[static_cast<std::size_t>(i)] < a.lo || b[static_cast<std::size_t>(i)] > a.hi) {
            throw DomainError("field component outside declared bounds");
        }
        x[static_cast<std::size_t>(i)] =
            std::numbers::pi * b[static_cast<std::size_t>(i)] / a.max_abs();
    }
    return x;
}

double normalize_target(double y_deg) { return y_deg / 360.0; }

Sample make_sample(const std::array<double, 3>& b, const FieldBounds& bounds,
                   HeadingConvention convention) {
    Sample s;
    s.b_raw = b;
    s.x_norm = normalize_input(b, bounds);
    s.y_raw_deg = heading_degrees(b, convention);
    s.y_norm = normalize_target(s.y_raw_deg);
    return s;
}

Dataset make_dataset(const DatasetConfig& config) {
    config.validate();
    Dataset d;
    d.config = config;
    Rng rng(config.seed);
    d.train.reserve(static_cast<std::size_t>(config.k_train));
    for (int k = 0; k < config.k_train; ++k) {
        d.train.push_back(make_sample(sample_field(rng, config.bounds), config.bounds,
                                      config.convention));
    }
    d.test.reserve(static_cast<std::size_t>(config.k_test));
    for (int k = 0; k < config.k_test; ++k) {
        d.test.push_back(make_sample(sample_field(rng, config.bounds), config.bounds,
                                     config.convention));
    }
    return d;
}

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_dataset_csv(const std::filesystem::path& path, std::span<const Sample> samples) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "Bx_nT,By_nT,Bz_nT,heading_deg\n";
    for (const Sample& s : samples) {
        out << format_g17(s.b_raw[0]) << ',' << format_g17(s.b_raw[1]) << ','
            << format_g17(s.b_raw[2]) << ',' << format_g17(s.y_raw_deg) << '\n';
    }
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

std::vector<Sample> read_dataset_csv(const std::filesystem::path& path,
                                     const FieldBounds& bounds,
                                     HeadingConvention convention) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "Bx_nT,By_nT,Bz_nT,heading_deg") {
        throw IoError("bad dataset header in " + path.string());
    }
    std::vector<Sample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::array<double, 3> b{};
        double y = 0.0;
        char sep = 0;
        if (!(row >> b[0] >> sep >> b[1] >> sep >> b[2] >> sep >> y)) {
            throw IoError("bad dataset row in " + path.string() + ": " + line);
        }
        Sample s = make_sample(b, bounds, convention);
        if (std::abs(s.y_raw_deg - y) > 1e-9) {
            throw IoError("heading column inconsistent with field columns in " +
                          path.string());
        }
        samples.push_back(s);
    }
    return samples;
}

void write_dataset_meta(const std::filesystem::path& path, const DatasetConfig& config) {
    json meta;
    meta["seed"] = config.seed;
    meta["k_train"] = config.k_train;
    meta["k_test"] = config.k_test;
    meta["bounds_nT"] = {
        {"bx", {config.bounds.bx.lo, config.bounds.bx.hi}},
        {"by", {config.bounds.by.lo, config.bounds.by.hi}},
        {"bz", {config.bounds.bz.lo, config.bounds.bz.hi}},
    };
    meta["input_scale"] = {
        {"kind", "per_axis_pi_over_max_abs"},
        {"max_abs_nT",
         {config.bounds.bx.max_abs(), config.bounds.by.max_abs(), config.bounds.bz.max_abs()}},
    };
    meta["target_scale"] = {{"kind", "divide_degrees"}, {"divisor", 360.0}};
    meta["heading_convention"] = heading_convention_name(config.convention);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << meta.dump(2) << '\n';
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

DatasetConfig read_dataset_meta(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    json meta;
    try {
        in >> meta;
        DatasetConfig config;
        config.seed = meta.at("seed").get<std::uint64_t>();
        config.k_train = meta.at("k_train").get<int>();
        config.k_test = meta.at("k_test").get<int>();
        const auto& b = meta.at("bounds_nT");
        config.bounds.bx = {b.at("bx")[0].get<double>(), b.at("bx")[1].get<double>()};
        config.bounds.by = {b.at("by")[0].get<double>(), b.at("by")[1].get<double>()};
        config.bounds.bz = {b.at("bz")[0].get<double>(), b.at("bz")[1].get<double>()};
        config.convention =
            heading_convention_from_name(meta.at("heading_convention").get<std::string>());
        config.validate();
        return config;
    } catch (const json::exception& e) {
        throw IoError("bad dataset metadata in " + path.string() + ": " + e.what());
    }
}

Dataset load_dataset_dir(const std::filesystem::path& dir) {
    Dataset d;
    d.config = read_dataset_meta(dir / "dataset_meta.json");
    d.train = read_dataset_csv(dir / "train.csv", d.config.bounds, d.config.convention);
    d.test = read_dataset_csv(dir / "test.csv", d.config.bounds, d.config.convention);
    if (d.train.empty() || d.test.empty()) {
        throw IoError("dataset in " + dir.string() + " is empty");
    }
    return d;
}

} // namespace icosim
