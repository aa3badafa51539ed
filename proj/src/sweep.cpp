#include "cliffmem/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cliffmem/adjoint.hpp"
#include "cliffmem/rng.hpp"
#include "cliffmem/stats.hpp"

namespace cliffmem {
namespace {

using json = nlohmann::json;

constexpr const char* kFamilies[] = {"idle", "brickwork", "repetition-refresh"};

bool known_family(const std::string& family) {
  return std::find(std::begin(kFamilies), std::end(kFamilies), family) !=
         std::end(kFamilies);
}

std::size_t as_count(const json& v, const char* what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw std::runtime_error(std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

// Seed chain for grid points: fold each coordinate through the splitmix
// finalizer so that every (family, n, gamma, depth) gets a decorrelated
// stream independent of grid order.
std::uint64_t fold_seed(std::uint64_t acc, std::uint64_t v) {
  return Rng::mix64(acc ^ Rng::mix64(v));
}

std::uint64_t family_tag(const std::string& family) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the name
  for (unsigned char ch : family) {
    h = (h ^ ch) * 1099511628211ULL;
  }
  return h;
}

std::uint64_t series_seed(const SweepConfig& cfg, std::size_t n, double gamma) {
  std::uint64_t acc = fold_seed(cfg.seed, family_tag(cfg.family));
  acc = fold_seed(acc, n);
  acc = fold_seed(acc, std::bit_cast<std::uint64_t>(gamma));
  return acc;
}

// Shortest decimal form that parses back to the same double: lossless for
// the CSV round trip, locale-independent, and easy on human readers.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct RowKeyLess {
  bool operator()(const SweepRow& a, const SweepRow& b) const {
    if (a.family != b.family) {
      return a.family < b.family;
    }
    if (a.n != b.n) {
      return a.n < b.n;
    }
    if (a.gamma != b.gamma) {
      return a.gamma < b.gamma;
    }
    return a.depth < b.depth;
  }
};

}  // namespace

std::vector<std::string> validate(const SweepConfig& cfg) {
  std::vector<std::string> out;
  if (!known_family(cfg.family)) {
    out.push_back("unknown family \"" + cfg.family + "\"");
  }
  if (cfg.n_values.empty()) {
    out.push_back("n grid is empty");
  }
  for (std::size_t n : cfg.n_values) {
    if (cfg.family == "brickwork" && n < 2) {
      out.push_back("brickwork needs n >= 2, got " + std::to_string(n));
    }
    if (cfg.family == "repetition-refresh" && (n < 3 || n % 2 == 0)) {
      out.push_back("repetition-refresh needs odd n >= 3, got " +
                    std::to_string(n));
    }
    if (cfg.family == "idle" && n < 1) {
      out.push_back("idle needs n >= 1");
    }
  }
  if (cfg.gamma_values.empty()) {
    out.push_back("gamma grid is empty");
  }
  for (double gamma : cfg.gamma_values) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      out.push_back("gamma must lie in [0, 1], got " + format_double(gamma));
    }
  }
  if (!(cfg.reset_rate >= 0.0 && cfg.reset_rate <= 1.0)) {
    out.push_back("reset_rate must lie in [0, 1]");
  }
  {
    ResetSpec probe;
    probe.bloch = cfg.reset_state;
    if (!reset_state_valid(probe)) {
      out.push_back("reset_state bloch norm exceeds 1");
    }
  }
  for (std::size_t i = 0; i + 1 < cfg.depths.size(); ++i) {
    if (cfg.depths[i] >= cfg.depths[i + 1]) {
      out.push_back("depth grid must be strictly increasing");
      break;
    }
  }
  if (cfg.trials < 100) {
    out.push_back("trials must be at least 100");
  }
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    out.push_back("confidence must lie in (0, 1)");
  }
  return out;
}

SweepConfig parse_sweep_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("sweep config JSON malformed: ") +
                             e.what());
  }
  try {
    SweepConfig cfg;
    cfg.family = j.at("family").get<std::string>();
    for (const json& v : j.at("n")) {
      cfg.n_values.push_back(as_count(v, "n entry"));
    }
    for (const json& v : j.at("gamma")) {
      cfg.gamma_values.push_back(v.get<double>());
    }
    if (j.contains("reset_rate")) {
      cfg.reset_rate = j.at("reset_rate").get<double>();
    }
    if (j.contains("reset_state")) {
      const json& arr = j.at("reset_state");
      if (!arr.is_array() || arr.size() != 3) {
        throw std::runtime_error("reset_state must be a 3-vector");
      }
      for (int i = 0; i < 3; ++i) {
        cfg.reset_state[i] = BlochComponent(arr[i].get<double>());
      }
    }
    for (const json& v : j.at("depths")) {
      cfg.depths.push_back(as_count(v, "depth entry"));
    }
    cfg.trials = j.at("trials").get<std::uint64_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("confidence")) {
      cfg.confidence = j.at("confidence").get<double>();
    }
    return cfg;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("sweep config JSON invalid: ") +
                             e.what());
  }
}

std::string serialize_sweep_config(const SweepConfig& cfg) {
  json j;
  j["family"] = cfg.family;
  j["n"] = cfg.n_values;
  j["gamma"] = cfg.gamma_values;
  j["reset_rate"] = cfg.reset_rate;
  j["reset_state"] = {cfg.reset_state[0].value, cfg.reset_state[1].value,
                      cfg.reset_state[2].value};
  j["depths"] = cfg.depths;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["confidence"] = cfg.confidence;
  return j.dump(2) + "\n";
}

bool operator==(const SweepRow& a, const SweepRow& b) {
  return a.family == b.family && a.n == b.n && a.gamma == b.gamma &&
         a.depth == b.depth && a.trials == b.trials &&
         a.survivors == b.survivors && a.p_hat == b.p_hat &&
         a.ci_lo == b.ci_lo && a.ci_hi == b.ci_hi && a.seed == b.seed;
}

bool same_grid_point(const SweepRow& a, const SweepRow& b) {
  return a.family == b.family && a.n == b.n && a.gamma == b.gamma &&
         a.depth == b.depth;
}

Circuit sweep_point_circuit(const SweepConfig& cfg, std::size_t n, double gamma,
                            std::size_t depth) {
  if (cfg.family == "idle") {
    return gen_idle(n, depth, gamma);
  }
  if (cfg.family == "repetition-refresh") {
    return gen_repetition_refresh(n, depth, gamma);
  }
  if (cfg.family == "brickwork") {
    // Seeded per series, not per depth: the rng stream is consumed layer by
    // layer, so circuits along the depth grid extend each other.
    Rng rng(series_seed(cfg, n, gamma));
    return gen_brickwork(n, depth, gamma, cfg.reset_rate, cfg.reset_state, rng);
  }
  throw std::invalid_argument("unknown family \"" + cfg.family + "\"");
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg,
                                const std::vector<SweepRow>& existing,
                                unsigned num_threads) {
  {
    const auto violations = validate(cfg);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid sweep config: " + violations.front());
    }
  }
  if (num_threads == 0) {
    num_threads = 1;
  }

  struct Point {
    std::size_t n;
    double gamma;
    std::size_t depth;
  };
  std::vector<Point> todo;
  std::vector<SweepRow> merged = existing;
  for (std::size_t n : cfg.n_values) {
    for (double gamma : cfg.gamma_values) {
      for (std::size_t depth : cfg.depths) {
        SweepRow probe;
        probe.family = cfg.family;
        probe.n = n;
        probe.gamma = gamma;
        probe.depth = depth;
        const bool done =
            std::any_of(existing.begin(), existing.end(),
                        [&](const SweepRow& row) {
                          return same_grid_point(row, probe);
                        });
        if (!done) {
          todo.push_back({n, gamma, depth});
        }
      }
    }
  }

  std::vector<SweepRow> fresh(todo.size());
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) {
        return;
      }
      try {
        const Point& pt = todo[i];
        const Circuit c = sweep_point_circuit(cfg, pt.n, pt.gamma, pt.depth);
        const std::uint64_t point_seed =
            fold_seed(series_seed(cfg, pt.n, pt.gamma), pt.depth);
        const SurvivalEstimate est =
            survival_probability(c, cfg.trials, point_seed, cfg.confidence, 1);
        SweepRow row;
        row.family = cfg.family;
        row.n = pt.n;
        row.gamma = pt.gamma;
        row.depth = pt.depth;
        row.trials = est.trials;
        row.survivors = est.survivors;
        row.p_hat = est.p_hat;
        row.ci_lo = est.ci_lo;
        row.ci_hi = est.ci_hi;
        row.seed = point_seed;
        fresh[i] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        next.store(todo.size());
        return;
      }
    }
  };
  if (num_threads == 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const unsigned count = std::min<std::size_t>(num_threads, todo.size());
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  merged.insert(merged.end(), fresh.begin(), fresh.end());
  std::stable_sort(merged.begin(), merged.end(), RowKeyLess{});
  return merged;
}

std::string write_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "family,n,gamma,depth,trials,survivors,p_hat,ci_lo,ci_hi,seed\n";
  for (const SweepRow& row : rows) {
    out += row.family;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.gamma);
    out += ',';
    out += std::to_string(row.depth);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += std::to_string(row.survivors);
    out += ',';
    out += format_double(row.p_hat);
    out += ',';
    out += format_double(row.ci_lo);
    out += ',';
    out += format_double(row.ci_hi);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("sweep CSV is empty");
  }
  if (line == "family,n,gamma,depth,trials,survivors,p_hat,ci_lo,ci_hi,seed\r") {
    throw std::runtime_error("sweep CSV must use LF line endings");
  }
  if (line != "family,n,gamma,depth,trials,survivors,p_hat,ci_lo,ci_hi,seed") {
    throw std::runtime_error("sweep CSV header mismatch: " + line);
  }
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 10) {
      throw std::runtime_error("sweep CSV line " + std::to_string(line_no) +
                               " has " + std::to_string(fields.size()) +
                               " fields, wanted 10");
    }
    try {
      SweepRow row;
      row.family = fields[0];
      row.n = std::stoull(fields[1]);
      row.gamma = std::stod(fields[2]);
      row.depth = std::stoull(fields[3]);
      row.trials = std::stoull(fields[4]);
      row.survivors = std::stoull(fields[5]);
      row.p_hat = std::stod(fields[6]);
      row.ci_lo = std::stod(fields[7]);
      row.ci_hi = std::stod(fields[8]);
      row.seed = std::stoull(fields[9]);
      rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw std::runtime_error("sweep CSV line " + std::to_string(line_no) +
                               " is not parseable");
    }
  }
  return rows;
}

}  // namespace cliffmem
