#include "stands/scenario_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "stands/errors.hpp"

namespace stands {
namespace {

struct RawValue {
    std::string text;
    int line = 0;
};

using Section = std::map<std::string, RawValue, std::less<>>;

struct RawConfig {
    std::string origin;
    Section layout;
    Section object;
    Section noise;
    Section detector;
    Section sim;
    std::vector<Section> attacks;
};

const std::map<std::string, std::vector<std::string>, std::less<>> kKnownKeys = {
    {"layout", {"offsets", "reference"}},
    {"object", {"distance", "range_override"}},
    {"noise", {"kind", "low", "high", "mean", "sigma"}},
    {"detector", {"sigma", "alpha", "dof", "threshold_mode", "k", "temporal_threshold"}},
    {"attack", {"sensor", "kind", "spoof_range", "onset", "duration"}},
    {"sim", {"runs", "seed", "calibration_runs"}},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(const RawConfig& cfg, int line, const std::string& msg) {
    throw ParseError(fmt::format("{}:{}: {}", cfg.origin, line, msg));
}

RawConfig tokenize(std::string_view text, std::string_view origin) {
    RawConfig cfg;
    cfg.origin = std::string(origin);

    Section* current = nullptr;
    std::string current_name;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(cfg, line_no, "unterminated section header");
            const std::string name{trim(line.substr(1, line.size() - 2))};
            if (!kKnownKeys.contains(name)) {
                fail(cfg, line_no, fmt::format("unknown section '[{}]'", name));
            }
            if (name == "attack") {
                cfg.attacks.emplace_back();
                current = &cfg.attacks.back();
            } else if (name == "layout") {
                current = &cfg.layout;
            } else if (name == "object") {
                current = &cfg.object;
            } else if (name == "noise") {
                current = &cfg.noise;
            } else if (name == "detector") {
                current = &cfg.detector;
            } else {
                current = &cfg.sim;
            }
            current_name = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(cfg, line_no, fmt::format("expected 'key = value', got '{}'", line));
        }
        if (current == nullptr) {
            fail(cfg, line_no, "key outside any [section]");
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        const auto& known = kKnownKeys.at(current_name);
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            fail(cfg, line_no, fmt::format("unknown key '{}' in section [{}]", key, current_name));
        }
        if (current->contains(key)) {
            fail(cfg, line_no, fmt::format("duplicate key '{}' in section [{}]", key, current_name));
        }
        (*current)[key] = RawValue{value, line_no};
    }
    return cfg;
}

double parse_double(const RawConfig& cfg, const std::string& key, const RawValue& raw) {
    const std::string_view sv = raw.text;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
        fail(cfg, raw.line, fmt::format("key '{}': '{}' is not a number", key, raw.text));
    }
    return out;
}

template <typename Int>
Int parse_integer(const RawConfig& cfg, const std::string& key, const RawValue& raw) {
    const std::string_view sv = raw.text;
    Int out{};
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (ec != std::errc{} || ptr != sv.data() + sv.size()) {
        fail(cfg, raw.line, fmt::format("key '{}': '{}' is not a valid integer", key, raw.text));
    }
    return out;
}

std::vector<double> parse_double_list(const RawConfig& cfg, const std::string& key,
                                      const RawValue& raw) {
    std::vector<double> out;
    std::string_view rest = raw.text;
    while (true) {
        const std::size_t comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        if (item.empty()) {
            fail(cfg, raw.line, fmt::format("key '{}': empty element in list '{}'", key, raw.text));
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            fail(cfg, raw.line, fmt::format("key '{}': '{}' is not a number", key, item));
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

const RawValue* find(const Section& section, std::string_view key) {
    const auto it = section.find(key);
    return it == section.end() ? nullptr : &it->second;
}

void forbid(const RawConfig& cfg, const Section& section, std::string_view section_name,
            std::initializer_list<std::string_view> keys, std::string_view reason) {
    for (const std::string_view key : keys) {
        if (const RawValue* raw = find(section, key)) {
            fail(cfg, raw->line,
                 fmt::format("key '{}' is not valid in [{}] {}", key, section_name, reason));
        }
    }
}

ScenarioSpec build_spec(const RawConfig& cfg) {
    // Collect every missing required key first so an empty file reports the
    // full list in one diagnostic.
    std::vector<std::string> missing;
    const auto require = [&](const Section& s, const char* section, const char* key) -> const RawValue* {
        const RawValue* raw = find(s, key);
        if (raw == nullptr) missing.push_back(fmt::format("{}.{}", section, key));
        return raw;
    };

    const RawValue* offsets_raw = require(cfg.layout, "layout", "offsets");
    const RawValue* reference_raw = require(cfg.layout, "layout", "reference");
    const RawValue* distance_raw = require(cfg.object, "object", "distance");
    const RawValue* noise_kind_raw = require(cfg.noise, "noise", "kind");
    const RawValue* sigma_raw = require(cfg.detector, "detector", "sigma");
    const RawValue* alpha_raw = require(cfg.detector, "detector", "alpha");
    const RawValue* mode_raw = require(cfg.detector, "detector", "threshold_mode");
    const RawValue* runs_raw = require(cfg.sim, "sim", "runs");
    const RawValue* seed_raw = require(cfg.sim, "sim", "seed");
    const RawValue* calib_raw = require(cfg.sim, "sim", "calibration_runs");
    for (std::size_t i = 0; i < cfg.attacks.size(); ++i) {
        const char* names[] = {"sensor", "kind", "onset"};
        for (const char* key : names) {
            if (find(cfg.attacks[i], key) == nullptr) {
                missing.push_back(fmt::format("attack[{}].{}", i, key));
            }
        }
    }
    if (!missing.empty()) {
        throw ParseError(fmt::format("{}: missing required keys: {}", cfg.origin,
                                     fmt::format("{}", fmt::join(missing, ", "))));
    }

    ScenarioSpec spec;
    spec.layout.offsets = parse_double_list(cfg, "offsets", *offsets_raw);
    spec.layout.reference = parse_integer<int>(cfg, "reference", *reference_raw);
    spec.object.true_distance = parse_double(cfg, "distance", *distance_raw);
    if (const RawValue* raw = find(cfg.object, "range_override")) {
        spec.range_override = parse_double_list(cfg, "range_override", *raw);
    }

    const std::string& noise_kind = noise_kind_raw->text;
    if (noise_kind == "none") {
        forbid(cfg, cfg.noise, "noise", {"low", "high", "mean", "sigma"}, "when kind = none");
        spec.noise = NoiseModel::none();
    } else if (noise_kind == "uniform") {
        forbid(cfg, cfg.noise, "noise", {"mean", "sigma"}, "when kind = uniform");
        const RawValue* lo = find(cfg.noise, "low");
        const RawValue* hi = find(cfg.noise, "high");
        if (lo == nullptr || hi == nullptr) {
            fail(cfg, noise_kind_raw->line, "uniform noise requires keys 'low' and 'high'");
        }
        spec.noise.kind = NoiseModel::Kind::Uniform;
        spec.noise.lo = parse_double(cfg, "low", *lo);
        spec.noise.hi = parse_double(cfg, "high", *hi);
    } else if (noise_kind == "gaussian") {
        forbid(cfg, cfg.noise, "noise", {"low", "high"}, "when kind = gaussian");
        const RawValue* mean = find(cfg.noise, "mean");
        const RawValue* sq = find(cfg.noise, "sigma");
        if (mean == nullptr || sq == nullptr) {
            fail(cfg, noise_kind_raw->line, "gaussian noise requires keys 'mean' and 'sigma'");
        }
        spec.noise.kind = NoiseModel::Kind::Gaussian;
        spec.noise.mean = parse_double(cfg, "mean", *mean);
        spec.noise.sigma = parse_double(cfg, "sigma", *sq);
    } else {
        fail(cfg, noise_kind_raw->line,
             fmt::format("noise kind must be none, uniform or gaussian, got '{}'", noise_kind));
    }

    spec.detector.sigma = parse_double(cfg, "sigma", *sigma_raw);
    spec.detector.alpha = parse_double(cfg, "alpha", *alpha_raw);
    if (const RawValue* raw = find(cfg.detector, "dof")) {
        spec.detector.dof = parse_integer<int>(cfg, "dof", *raw);
    } else {
        spec.detector.dof = std::max(1, spec.layout.sensor_count() - 1);
    }
    const std::string& mode = mode_raw->text;
    if (mode == "calibrated") {
        spec.detector.threshold_mode = ThresholdMode::Calibrated;
    } else if (mode == "chi_squared") {
        spec.detector.threshold_mode = ThresholdMode::ChiSquared;
    } else {
        fail(cfg, mode_raw->line,
             fmt::format("threshold_mode must be calibrated or chi_squared, got '{}'", mode));
    }
    if (const RawValue* raw = find(cfg.detector, "k")) {
        spec.detector.k = parse_double(cfg, "k", *raw);
    }
    if (const RawValue* raw = find(cfg.detector, "temporal_threshold")) {
        spec.detector.temporal_threshold = parse_double(cfg, "temporal_threshold", *raw);
    }

    for (std::size_t i = 0; i < cfg.attacks.size(); ++i) {
        const Section& block = cfg.attacks[i];
        AttackEntry entry;
        entry.sensor = parse_integer<int>(cfg, "sensor", *find(block, "sensor"));
        entry.onset_run = parse_integer<int>(cfg, "onset", *find(block, "onset"));
        const RawValue* kind_raw = find(block, "kind");
        if (kind_raw->text == "triggering") {
            entry.kind = AttackKind::triggering();
        } else if (kind_raw->text == "deflection") {
            entry.kind = AttackKind::deflection();
        } else {
            fail(cfg, kind_raw->line,
                 fmt::format("attack kind must be triggering or deflection, got '{}'", kind_raw->text));
        }
        if (const RawValue* raw = find(block, "spoof_range")) {
            entry.kind.spoof_range = parse_double(cfg, "spoof_range", *raw);
        }
        if (const RawValue* raw = find(block, "duration")) {
            if (raw->text != "open") {
                entry.duration_runs = parse_integer<int>(cfg, "duration", *raw);
            }
        }
        spec.schedule.entries.push_back(entry);
    }

    spec.runs = parse_integer<int>(cfg, "runs", *runs_raw);
    spec.seed = parse_integer<std::uint64_t>(cfg, "seed", *seed_raw);
    spec.calibration_runs = parse_integer<int>(cfg, "calibration_runs", *calib_raw);
    return spec;
}

std::string num(double v) { return fmt::format("{}", v); }

std::string join_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += num(values[i]);
    }
    return out;
}

}  // namespace

ScenarioSpec parse_scenario_text(std::string_view text, std::string_view origin) {
    ScenarioSpec spec = build_spec(tokenize(text, origin));
    spec.validate(true);
    return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open scenario file '{}'", path));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path);
}

std::string echo_scenario(const ScenarioSpec& spec, const CalibrationSummary* calibration) {
    std::string out = "# resolved scenario (auto-generated echo)\n";
    if (calibration != nullptr) {
        out += fmt::format("# spatial_threshold = {}\n", num(calibration->spatial_threshold));
        out += fmt::format("# chi_squared_eta = {}\n", num(calibration->chi_squared_eta));
        out += fmt::format("# calibrated_threshold = {}\n", num(calibration->calibrated_threshold));
        out += fmt::format("# baseline_mean = {}\n", num(calibration->mean));
        out += fmt::format("# baseline_std = {}\n", num(calibration->stddev));
        out += fmt::format("# baseline_runs = {}\n", calibration->runs);
    }
    out += "\n[layout]\n";
    out += fmt::format("offsets = {}\n", join_list(spec.layout.offsets));
    out += fmt::format("reference = {}\n", spec.layout.reference);

    out += "\n[object]\n";
    out += fmt::format("distance = {}\n", num(spec.object.true_distance));
    if (spec.range_override) {
        out += fmt::format("range_override = {}\n", join_list(*spec.range_override));
    }

    out += "\n[noise]\n";
    switch (spec.noise.kind) {
        case NoiseModel::Kind::None:
            out += "kind = none\n";
            break;
        case NoiseModel::Kind::Uniform:
            out += "kind = uniform\n";
            out += fmt::format("low = {}\n", num(spec.noise.lo));
            out += fmt::format("high = {}\n", num(spec.noise.hi));
            break;
        case NoiseModel::Kind::Gaussian:
            out += "kind = gaussian\n";
            out += fmt::format("mean = {}\n", num(spec.noise.mean));
            out += fmt::format("sigma = {}\n", num(spec.noise.sigma));
            break;
    }

    out += "\n[detector]\n";
    out += fmt::format("sigma = {}\n", num(spec.detector.sigma));
    out += fmt::format("alpha = {}\n", num(spec.detector.alpha));
    out += fmt::format("dof = {}\n", spec.detector.dof);
    out += fmt::format("threshold_mode = {}\n", spec.detector.threshold_mode == ThresholdMode::Calibrated
                                                    ? "calibrated"
                                                    : "chi_squared");
    out += fmt::format("k = {}\n", num(spec.detector.k));
    if (spec.detector.temporal_threshold) {
        out += fmt::format("temporal_threshold = {}\n", num(*spec.detector.temporal_threshold));
    }

    for (const AttackEntry& entry : spec.schedule.entries) {
        out += "\n[attack]\n";
        out += fmt::format("sensor = {}\n", entry.sensor);
        out += fmt::format("kind = {}\n", entry.kind.variant == AttackKind::Variant::Triggering
                                              ? "triggering"
                                              : "deflection");
        out += fmt::format("spoof_range = {}\n", num(entry.kind.spoof_range));
        out += fmt::format("onset = {}\n", entry.onset_run);
        if (entry.duration_runs) {
            out += fmt::format("duration = {}\n", *entry.duration_runs);
        } else {
            out += "duration = open\n";
        }
    }

    out += "\n[sim]\n";
    out += fmt::format("runs = {}\n", spec.runs);
    out += fmt::format("seed = {}\n", spec.seed);
    out += fmt::format("calibration_runs = {}\n", spec.calibration_runs);
    return out;
}

}  // namespace stands
