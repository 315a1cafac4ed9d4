#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>
#include <thread>
#include <variant>

#include <json.hpp>

#include "rbmedian/exact.hpp"
#include "rbmedian/gap.hpp"
#include "rbmedian/io.hpp"
#include "rbmedian/local_search.hpp"

namespace rbm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  return doc.at(key).get<T>();
}

GeneratorBlock parse_generator(const json& doc) {
  GeneratorBlock g;
  g.count = get_or<std::size_t>(doc, "count", g.count);
  g.n_clients = get_or<std::size_t>(doc, "n_clients", g.n_clients);
  g.n_red = get_or<std::size_t>(doc, "n_red", g.n_red);
  g.n_blue = get_or<std::size_t>(doc, "n_blue", g.n_blue);
  g.k_r = get_or<std::size_t>(doc, "k_r", g.k_r);
  g.k_b = get_or<std::size_t>(doc, "k_b", g.k_b);
  g.box = get_or<double>(doc, "box", g.box);
  g.grid = get_or<std::int64_t>(doc, "grid", g.grid);
  g.seed = get_or<std::uint64_t>(doc, "seed", g.seed);
  return g;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void add_corpus(const std::string& dir, std::vector<ExperimentInstance>& out) {
  if (!fs::is_directory(dir)) throw InputError("corpus directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "instance.json" || ends_with(name, ".instance.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    ExperimentInstance inst;
    inst.name = fs::relative(file, dir).generic_string();
    inst.path = file.string();
    const std::string name = file.filename().string();
    fs::path initial, global;
    if (name == "instance.json") {
      initial = file.parent_path() / "local.json";
      global = file.parent_path() / "global.json";
    } else {
      const std::string stem = name.substr(0, name.size() - std::string(".instance.json").size());
      initial = file.parent_path() / (stem + ".initial.json");
      global = file.parent_path() / (stem + ".global.json");
    }
    if (fs::exists(initial)) inst.initial_path = initial.string();
    if (fs::exists(global)) inst.candidate_paths.push_back(global.string());
    out.push_back(std::move(inst));
  }
}

struct Loaded {
  std::optional<AnyInstance> instance;
  std::optional<Solution> initial;
  std::vector<Solution> candidates;
  std::string error;
  // OPT when certified, rendered and as a double for ratios.
  std::optional<std::string> opt_text;
  std::optional<double> opt_value;
};

Loaded load(const ExperimentSpec& spec, const ExperimentInstance& src) {
  Loaded out;
  try {
    if (src.gap) {
      const GapInstance gap = build_gap({src.gap->first, src.gap->second});
      out.instance = gap.instance;
      out.initial = gap.local;
      out.candidates.push_back(gap.global);
    } else if (src.euclidean_seed) {
      const GeneratorBlock& g = spec.euclidean;
      out.instance = gen_euclidean({g.n_clients, g.n_red, g.n_blue, g.k_r, g.k_b, *src.euclidean_seed},
                                   g.box);
    } else if (src.grid_seed) {
      const GeneratorBlock& g = spec.grid;
      out.instance =
          gen_grid({g.n_clients, g.n_red, g.n_blue, g.k_r, g.k_b, *src.grid_seed}, g.grid);
    } else {
      out.instance = parse_instance(read_file(src.path));
      if (!src.initial_path.empty()) out.initial = parse_solution(read_file(src.initial_path));
      for (const std::string& c : src.candidate_paths) {
        out.candidates.push_back(parse_solution(read_file(c)));
      }
    }
    std::visit(
        [&](const auto& inst) {
          if (out.initial) inst.check_feasible(*out.initial);
          try {
            if (const auto opt = certified_opt(inst, out.candidates, spec.opt_cap)) {
              if constexpr (kExactDistance<std::decay_t<decltype(opt->cost)>>) {
                out.opt_text = std::to_string(opt->cost);
              } else {
                out.opt_text = exact_decimal(opt->cost);
              }
              out.opt_value = static_cast<double>(opt->cost);
            }
          } catch (const CapExceeded&) {
            // OPT stays blank.
          }
        },
        *out.instance);
  } catch (const std::exception& e) {
    out.instance.reset();
    out.error = e.what();
  }
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed experiment spec: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    if (!doc.is_object()) throw InputError("experiment spec must be a JSON object");
    if (doc.contains("p")) {
      spec.p_values = doc.at("p").is_array() ? doc.at("p").get<std::vector<std::size_t>>()
                                             : std::vector<std::size_t>{doc.at("p").get<std::size_t>()};
    }
    for (const std::size_t p : spec.p_values) {
      if (p < 1) throw InputError("p values must be >= 1");
    }
    if (doc.contains("seeds")) spec.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    spec.epsilon = get_or<double>(doc, "epsilon", spec.epsilon);
    if (spec.epsilon < 0) throw InputError("epsilon must be >= 0");
    const std::string rule = get_or<std::string>(doc, "rule", "best");
    if (rule != "best" && rule != "first") throw InputError("rule must be \"best\" or \"first\"");
    spec.first_improvement = rule == "first";
    spec.opt_cap = get_or<std::uint64_t>(doc, "opt_cap", spec.opt_cap);
    spec.max_iters = get_or<std::uint64_t>(doc, "max_iters", spec.max_iters);
    spec.threads = get_or<unsigned>(doc, "threads", spec.threads);

    if (doc.contains("instances")) {
      for (const json& item : doc.at("instances")) {
        ExperimentInstance inst;
        if (item.is_string()) {
          inst.path = resolve(item.get<std::string>(), base_dir);
          inst.name = item.get<std::string>();
        } else {
          inst.path = resolve(item.at("path").get<std::string>(), base_dir);
          inst.name = get_or<std::string>(item, "name", item.at("path").get<std::string>());
          inst.initial_path = resolve(get_or<std::string>(item, "initial", ""), base_dir);
          for (const auto& c : get_or<std::vector<std::string>>(item, "candidates", {})) {
            inst.candidate_paths.push_back(resolve(c, base_dir));
          }
        }
        spec.instances.push_back(std::move(inst));
      }
    }
    if (doc.contains("corpus")) add_corpus(resolve(doc.at("corpus").get<std::string>(), base_dir), spec.instances);
    if (doc.contains("gap")) {
      const json& g = doc.at("gap");
      const auto ps = g.at("p").get<std::vector<std::int64_t>>();
      for (const std::int64_t p : ps) {
        std::vector<std::int64_t> ells;
        if (g.contains("ell")) {
          ells = g.at("ell").get<std::vector<std::int64_t>>();
        } else {
          for (std::int64_t ell = 2 * p; ell <= g.at("ell_max").get<std::int64_t>(); ++ell) {
            ells.push_back(ell);
          }
        }
        for (const std::int64_t ell : ells) {
          GapParams{p, ell}.validate();
          ExperimentInstance inst;
          inst.name = "gap-p" + std::to_string(p) + "-l" + std::to_string(ell);
          inst.gap = {p, ell};
          inst.fixed_p = static_cast<std::size_t>(p);
          spec.instances.push_back(std::move(inst));
        }
      }
    }
    if (doc.contains("euclidean")) {
      spec.euclidean = parse_generator(doc.at("euclidean"));
      for (std::size_t i = 0; i < spec.euclidean.count; ++i) {
        ExperimentInstance inst;
        inst.euclidean_seed = spec.euclidean.seed + i;
        inst.name = "euclidean-" + std::to_string(*inst.euclidean_seed);
        spec.instances.push_back(std::move(inst));
      }
    }
    if (doc.contains("grid")) {
      spec.grid = parse_generator(doc.at("grid"));
      for (std::size_t i = 0; i < spec.grid.count; ++i) {
        ExperimentInstance inst;
        inst.grid_seed = spec.grid.seed + i;
        inst.name = "grid-" + std::to_string(*inst.grid_seed);
        spec.instances.push_back(std::move(inst));
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid experiment spec: ") + e.what());
  }
  return spec;
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  std::vector<Loaded> loaded(spec.instances.size());
  parallel_for(loaded.size(), spec.threads,
               [&](std::size_t i) { loaded[i] = load(spec, spec.instances[i]); });

  struct Task {
    std::size_t instance;
    std::size_t p;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < spec.instances.size(); ++i) {
    const auto& fixed = spec.instances[i].fixed_p;
    const std::vector<std::size_t> ps = fixed ? std::vector<std::size_t>{*fixed} : spec.p_values;
    for (const std::size_t p : ps) {
      for (const std::uint64_t seed : spec.seeds) tasks.push_back({i, p, seed});
    }
  }

  ExperimentOutcome outcome;
  outcome.rows.resize(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    const Loaded& src = loaded[task.instance];
    ExperimentRow& row = outcome.rows[t];
    row.instance = spec.instances[task.instance].name;
    row.p = task.p;
    row.seed = task.seed;
    if (!src.instance) {
      row.status = "error: " + src.error;
      return;
    }
    row.opt = src.opt_text.value_or("");
    try {
      std::visit(
          [&](const auto& inst) {
            SearchConfig config;
            config.p = task.p;
            config.epsilon = spec.epsilon;
            config.rule = spec.first_improvement ? SearchRule::kFirstImprovement
                                                 : SearchRule::kBestImprovement;
            config.seed = task.seed;
            config.max_iters = spec.max_iters;
            const auto start = std::chrono::steady_clock::now();
            const auto result = run(inst, config, src.initial);
            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
            const auto total = result.assignment.total;
            if constexpr (kExactDistance<std::decay_t<decltype(total)>>) {
              row.local_cost = std::to_string(total);
            } else {
              row.local_cost = exact_decimal(total);
            }
            row.iterations = result.iterations;
            if (result.termination == Termination::kIterationCap) row.status = "iteration-cap";
            if (src.opt_value) {
              const double local = static_cast<double>(total);
              if (*src.opt_value > 0) {
                row.ratio = local / *src.opt_value;
              } else if (local == 0) {
                row.ratio = 1.0;
              }
            }
          },
          *src.instance);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  outcome.summary = summarize(outcome.rows);
  return outcome;
}

std::map<std::size_t, PSummary> summarize(const std::vector<ExperimentRow>& rows) {
  std::map<std::size_t, PSummary> out;
  for (const ExperimentRow& row : rows) {
    PSummary& s = out[row.p];
    ++s.rows;
    if (!row.ratio) continue;
    ++s.rows_with_opt;
    s.max_ratio = std::max(s.max_ratio, *row.ratio);
    s.mean_ratio += *row.ratio;
  }
  for (auto& [p, s] : out) {
    if (s.rows_with_opt > 0) s.mean_ratio /= static_cast<double>(s.rows_with_opt);
    s.flagged = p == 1 && s.max_ratio > 7.0 + 1e-9;
  }
  return out;
}

std::string to_csv(const ExperimentOutcome& outcome, bool include_timing) {
  std::ostringstream os;
  os << kCsvVersionLine << "\n";
  os << "instance,p,seed,local_cost,opt,ratio,iterations,wall_time_ms,status\n";
  for (const ExperimentRow& r : outcome.rows) {
    os << csv_field(r.instance) << ',' << r.p << ',' << r.seed << ',' << r.local_cost << ','
       << r.opt << ',' << (r.ratio ? exact_decimal(*r.ratio) : "") << ',' << r.iterations << ',';
    if (include_timing && r.status.rfind("error", 0) != 0) {
      std::ostringstream ms;
      ms.setf(std::ios::fixed);
      ms.precision(3);
      ms << r.wall_ms;
      os << ms.str();
    }
    os << ',' << csv_field(r.status) << "\n";
  }
  return os.str();
}

std::string summary_text(const ExperimentOutcome& outcome) {
  std::ostringstream os;
  for (const auto& [p, s] : outcome.summary) {
    os << "p=" << p << " rows=" << s.rows << " with_opt=" << s.rows_with_opt;
    if (s.rows_with_opt > 0) {
      os << " max_ratio=" << exact_decimal(s.max_ratio) << " mean_ratio=" << exact_decimal(s.mean_ratio);
    }
    if (s.flagged) os << " FLAGGED: ratio above 7 at p=1";
    os << "\n";
  }
  return os.str();
}

std::string summary_json(const ExperimentOutcome& outcome) {
  json doc = json::array();
  for (const auto& [p, s] : outcome.summary) {
    json entry{{"p", p}, {"rows", s.rows}, {"rows_with_opt", s.rows_with_opt}, {"flagged", s.flagged}};
    entry["max_ratio"] = s.rows_with_opt > 0 ? json(s.max_ratio) : json(nullptr);
    entry["mean_ratio"] = s.rows_with_opt > 0 ? json(s.mean_ratio) : json(nullptr);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace rbm::cli
