#include "photonholes/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace photonholes {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

// Text for a value stored as text * scale: the double nearest value / scale
// whose product with scale reproduces value exactly, if there is one.
std::string format_scaled(double value, double scale) {
  const double guess = value / scale;
  double below = guess;
  double above = guess;
  for (int step = 0; step < 8; ++step) {
    if (above * scale == value) return format_double(above);
    if (below * scale == value) return format_double(below);
    above = std::nextafter(above, std::numeric_limits<double>::infinity());
    below = std::nextafter(below, -std::numeric_limits<double>::infinity());
  }
  return format_double(guess);
}

// Magnitude m with polar(m, kLockPhase) == alpha, when alpha is on the lock phase.
std::string format_alpha(Complex alpha) {
  const double guess = std::abs(alpha);
  double below = guess;
  double above = guess;
  for (int step = 0; step < 8; ++step) {
    if (std::polar(above, kLockPhase) == alpha) return format_double(above);
    if (std::polar(below, kLockPhase) == alpha) return format_double(below);
    above = std::nextafter(above, std::numeric_limits<double>::infinity());
    below = std::nextafter(below, -std::numeric_limits<double>::infinity());
  }
  return format_double(guess);
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view, int)> parse;
  std::function<std::string(const ExperimentConfig&)> format;
};

double parse_real(std::string_view key, std::string_view value, int line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out))
    throw ConfigError(std::string(key), line, "expected a real number, got '" + std::string(value) + "'");
  return out;
}

std::int64_t parse_integer(std::string_view key, std::string_view value, int line) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(std::string(key), line, "expected an integer, got '" + std::string(value) + "'");
  return out;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value, int line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError(std::string(key), line, "expected a non-negative integer, got '" + std::string(value) + "'");
  return out;
}

double in_range(std::string_view key, double v, double lo, double hi, int line, bool open_hi = false) {
  const bool ok = v >= lo && (open_hi ? v < hi : v <= hi);
  if (!ok) {
    throw ConfigError(std::string(key), line,
                      "value " + format_double(v) + " outside [" + format_double(lo) + ", " + format_double(hi) +
                          (open_hi ? ")" : "]"));
  }
  return v;
}

double positive(std::string_view key, double v, int line) {
  if (!(v > 0.0)) throw ConfigError(std::string(key), line, "value must be positive");
  return v;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"scenario",
       [](ExperimentConfig& c, std::string_view v, int line) {
         auto s = parse_scenario(v);
         if (!s) throw ConfigError("scenario", line, "unknown scenario '" + std::string(v) + "'");
         c.scenario = *s;
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.scenario)); }},
      {"mode",
       [](ExperimentConfig& c, std::string_view v, int line) {
         if (v == "exact") {
           c.mode = RunMode::exact;
         } else if (v == "monte_carlo") {
           c.mode = RunMode::monte_carlo;
         } else {
           throw ConfigError("mode", line, "expected 'exact' or 'monte_carlo'");
         }
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.mode)); }},
      {"xi",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.sources.xi = in_range("xi", parse_real("xi", v, line), 0.0, 0.1, line, true);
       },
       [](const ExperimentConfig& c) { return format_double(c.sources.xi); }},
      {"alpha",
       [](ExperimentConfig& c, std::string_view v, int line) {
         const double m = in_range("alpha", parse_real("alpha", v, line), 0.0, 0.5, line);
         c.sources.alpha = std::polar(m, kLockPhase);
       },
       [](const ExperimentConfig& c) { return format_alpha(c.sources.alpha); }},
      {"phase_deg",
       [](ExperimentConfig& c, std::string_view v, int line) { c.sources.phi = parse_real("phase_deg", v, line) * kDegree; },
       [](const ExperimentConfig& c) { return format_scaled(c.sources.phi, kDegree); }},
      {"overlap",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.sources.overlap = in_range("overlap", parse_real("overlap", v, line), 0.0, 1.0, line);
       },
       [](const ExperimentConfig& c) { return format_double(c.sources.overlap); }},
      {"efficiency",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.detectors.efficiency = in_range("efficiency", parse_real("efficiency", v, line), 0.0, 1.0, line);
       },
       [](const ExperimentConfig& c) { return format_double(c.detectors.efficiency); }},
      {"dark_prob",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.detectors.dark_prob = in_range("dark_prob", parse_real("dark_prob", v, line), 0.0, 1.0, line);
       },
       [](const ExperimentConfig& c) { return format_double(c.detectors.dark_prob); }},
      {"rep_rate_hz",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.train.rep_rate_hz = positive("rep_rate_hz", parse_real("rep_rate_hz", v, line), line);
       },
       [](const ExperimentConfig& c) { return format_double(c.train.rep_rate_hz); }},
      {"n_pulses",
       [](ExperimentConfig& c, std::string_view v, int line) {
         const auto n = parse_integer("n_pulses", v, line);
         if (n < 1) throw ConfigError("n_pulses", line, "value must be at least 1");
         c.train.n_pulses = n;
       },
       [](const ExperimentConfig& c) { return format_int(c.train.n_pulses); }},
      {"seed",
       [](ExperimentConfig& c, std::string_view v, int line) { c.seed = parse_unsigned("seed", v, line); },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      {"bin_width_ns",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.bin_width = positive("bin_width_ns", parse_real("bin_width_ns", v, line), line) * 1e-9;
       },
       [](const ExperimentConfig& c) { return format_scaled(c.bin_width, 1e-9); }},
      {"window_ns",
       [](ExperimentConfig& c, std::string_view v, int line) {
         c.window = positive("window_ns", parse_real("window_ns", v, line), line) * 1e-9;
       },
       [](const ExperimentConfig& c) { return format_scaled(c.window, 1e-9); }},
      {"delay_pulses",
       [](ExperimentConfig& c, std::string_view v, int line) {
         const auto k = parse_integer("delay_pulses", v, line);
         if (k < 1 || k > 1'000'000) throw ConfigError("delay_pulses", line, "value must lie in [1, 1000000]");
         c.franson.delay_pulses = static_cast<int>(k);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.franson.delay_pulses); }},
      {"phase_a_deg",
       [](ExperimentConfig& c, std::string_view v, int line) { c.franson.phase_a = parse_real("phase_a_deg", v, line) * kDegree; },
       [](const ExperimentConfig& c) { return format_scaled(c.franson.phase_a, kDegree); }},
      {"phase_b_deg",
       [](ExperimentConfig& c, std::string_view v, int line) { c.franson.phase_b = parse_real("phase_b_deg", v, line) * kDegree; },
       [](const ExperimentConfig& c) { return format_scaled(c.franson.phase_b, kDegree); }},
  };
  return table;
}

}  // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : key + ": ") + message),
      key_(std::move(key)),
      line_(line) {}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg = default_experiment_config();
  std::map<std::string, std::pair<std::string, int>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", line_no, "missing key");
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    const bool known = std::any_of(fields().begin(), fields().end(), [&](const Field& f) { return key == f.key; });
    if (!known) throw ConfigError(key, line_no, "unknown key");
    if (!entries.emplace(key, std::pair{value, line_no}).second)
      throw ConfigError(key, line_no, "duplicate key");
  }
  for (const auto& f : fields()) {
    if (auto it = entries.find(f.key); it != entries.end()) f.parse(cfg, it->second.first, it->second.second);
  }
  if (!entries.contains("alpha")) {
    cfg.sources.alpha = matched_alpha(cfg.sources.xi);
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", 0, e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.format(cfg) + "\n";
  return out;
}

std::string format_histogram(const TacHistogram& h) {
  std::string out = "# tac_histogram bin_width_s=" + format_double(h.bin_width()) +
                    " window_s=" + format_double(h.window()) + " n_starts=" + std::to_string(h.n_starts()) + "\n";
  out += "bin_start_ns,bin_end_ns,counts\n";
  const double width_ns = h.bin_width() * 1e9;
  const double window_ns = h.window() * 1e9;
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    const double start = -window_ns + static_cast<double>(i) * width_ns;
    const double end = -window_ns + static_cast<double>(i + 1) * width_ns;
    out += format_double(start) + "," + format_double(end) + "," + std::to_string(h.counts()[i]) + "\n";
  }
  return out;
}

TacHistogram parse_histogram(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    if (auto l = trim(text.substr(pos, end - pos)); !l.empty()) lines.push_back(l);
    pos = end + 1;
  }
  if (lines.size() < 2 || !lines[0].starts_with("# tac_histogram"))
    throw IoError("histogram text lacks the '# tac_histogram' metadata line");
  double bin_width = 0.0;
  double window = 0.0;
  std::int64_t n_starts = 0;
  std::istringstream meta{std::string(lines[0].substr(15))};
  for (std::string token; meta >> token;) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw IoError("malformed histogram metadata token " + token);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "bin_width_s") {
        bin_width = parse_real(key, value, 1);
      } else if (key == "window_s") {
        window = parse_real(key, value, 1);
      } else if (key == "n_starts") {
        n_starts = parse_integer(key, value, 1);
      } else {
        throw IoError("unknown histogram metadata key " + key);
      }
    } catch (const ConfigError& e) {
      throw IoError(std::string("histogram metadata: ") + e.what());
    }
  }
  if (lines[1] != "bin_start_ns,bin_end_ns,counts") throw IoError("unexpected histogram header line");
  TacHistogram h(bin_width, window);
  if (lines.size() - 2 != h.bin_count())
    throw IoError("histogram has " + std::to_string(lines.size() - 2) + " rows, geometry needs " +
                  std::to_string(h.bin_count()));
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    const auto row = lines[i + 2];
    const auto c1 = row.find(',');
    const auto c2 = row.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw IoError("malformed histogram row " + std::to_string(i + 3));
    try {
      const double start = parse_real("bin_start_ns", row.substr(0, c1), static_cast<int>(i + 3));
      if (std::abs(start * 1e-9 - h.bin_start(i)) > 1e-6 * h.bin_width())
        throw IoError("histogram row " + std::to_string(i + 3) + " does not match the bin geometry");
      const auto count = parse_integer("counts", row.substr(c2 + 1), static_cast<int>(i + 3));
      if (count < 0) throw IoError("negative count in histogram row " + std::to_string(i + 3));
      h.set_count(i, count);
    } catch (const ConfigError& e) {
      throw IoError(std::string("histogram: ") + e.what());
    }
  }
  h.add_starts(n_starts);
  return h;
}

void export_histogram(const TacHistogram& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_histogram(h);
  if (!out) throw IoError("failed writing histogram to " + path.string());
}

TacHistogram import_histogram(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open histogram file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_histogram(buffer.str());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string format_summary(const Summary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("na"); };
  std::string out;
  out += "visibility = " + opt(s.visibility) + "\n";
  out += "S = " + opt(s.S) + "\n";
  out += "singles_a = " + format_double(s.singles_a) + "\n";
  out += "singles_b = " + format_double(s.singles_b) + "\n";
  out += "zero_delay_peak = " + format_double(s.zero_delay_peak) + "\n";
  out += "mean_side_peak = " + format_double(s.mean_side_peak) + "\n";
  return out;
}

}  // namespace photonholes
