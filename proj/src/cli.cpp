#include "shorake/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "shorake/gsc.hpp"
#include "shorake/joint.hpp"
#include "shorake/monte_carlo.hpp"
#include "shorake/outage.hpp"
#include "shorake/quadrature.hpp"

#include "CLI11.hpp"

namespace shorake::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

/// Typed access into a ParsedConfig with line-precise errors and
/// consumed-key tracking (leftover keys are reported as unknown).
class ConfigReader {
  public:
    explicit ConfigReader(const ParsedConfig& parsed) : parsed_(parsed) {}

    bool has(const std::string& key) const { return parsed_.entries.count(key) > 0; }

    std::optional<std::string> get_string(const std::string& key) {
        auto it = parsed_.entries.find(key);
        if (it == parsed_.entries.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second.first;
    }

    std::string require_string(const std::string& key) {
        auto v = get_string(key);
        if (!v) throw ConfigError(parsed_.path, 0, "missing required key '" + key + "'");
        return *v;
    }

    int line_of(const std::string& key) const {
        auto it = parsed_.entries.find(key);
        return it == parsed_.entries.end() ? 0 : it->second.second;
    }

    double require_double(const std::string& key) { return parse_double(key, require_string(key)); }

    std::optional<double> get_double(const std::string& key) {
        auto v = get_string(key);
        if (!v) return std::nullopt;
        return parse_double(key, *v);
    }

    long long require_int(const std::string& key) { return parse_int(key, require_string(key)); }

    std::optional<long long> get_int(const std::string& key) {
        auto v = get_string(key);
        if (!v) return std::nullopt;
        return parse_int(key, *v);
    }

    std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
        std::vector<double> out;
        for (const std::string& part : split(value, ','))
            out.push_back(parse_double(key, part));
        return out;
    }

    double parse_double(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(parsed_.path, line_of(key),
                              "key '" + key + "': cannot parse '" + value + "' as a number");
        }
    }

    long long parse_int(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(parsed_.path, line_of(key),
                              "key '" + key + "': cannot parse '" + value + "' as an integer");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        throw ConfigError(parsed_.path, line_of(key), "key '" + key + "': " + message);
    }

    void reject_unknown() const {
        for (const auto& [key, value] : parsed_.entries) {
            if (!consumed_.count(key))
                throw ConfigError(parsed_.path, value.second, "unknown key '" + key + "'");
        }
    }

    const std::string& path() const { return parsed_.path; }

  private:
    const ParsedConfig& parsed_;
    std::set<std::string> consumed_;
};

pdp::PdpSpec read_pdp_spec(ConfigReader& reader, const std::string& prefix,
                           const pdp::PdpSpec* fallback) {
    pdp::PdpSpec spec;
    bool any = false;
    if (auto kind = reader.get_string(prefix + "kind")) {
        any = true;
        if (*kind == "exponential")
            spec.kind = pdp::Kind::exponential;
        else if (*kind == "uniform")
            spec.kind = pdp::Kind::uniform;
        else if (*kind == "explicit")
            spec.kind = pdp::Kind::explicit_values;
        else
            reader.fail(prefix + "kind", "expected exponential, uniform or explicit");
    } else if (fallback) {
        spec = *fallback;
    }

    const bool has_lin = reader.has(prefix + "gamma_bar");
    const bool has_db = reader.has(prefix + "gamma_bar_db");
    if (has_lin && has_db)
        reader.fail(prefix + "gamma_bar", "give gamma_bar either linear or in dB, not both");
    if (has_lin) {
        spec.gamma_bar = reader.require_double(prefix + "gamma_bar");
        any = true;
    } else if (has_db) {
        spec.gamma_bar = db_to_linear(reader.require_double(prefix + "gamma_bar_db"));
        any = true;
    }
    if (auto delta = reader.get_double(prefix + "delta")) {
        spec.delta = *delta;
        any = true;
    }
    if (auto values = reader.get_string(prefix + "values")) {
        spec.values = reader.parse_double_list(prefix + "values", *values);
        any = true;
    }
    if (!any && !fallback)
        throw ConfigError(reader.path(), 0, "missing power delay profile section '" + prefix + "*'");
    if (spec.kind == pdp::Kind::explicit_values && spec.values.empty())
        reader.fail(prefix + "kind", "explicit profile requires '" + prefix + "values'");
    if (!(spec.gamma_bar > 0.0)) reader.fail(prefix + "gamma_bar", "gamma_bar must be positive");
    if (!(spec.delta >= 0.0)) reader.fail(prefix + "delta", "delta must be nonnegative");
    return spec;
}

}  // namespace

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    ParsedConfig parsed;
    parsed.path = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        parsed.raw_lines.push_back(line);
        std::string body = line;
        if (auto hash = body.find('#'); hash != std::string::npos) body.erase(hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path, lineno, "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(path, lineno, "empty key");
        if (value.empty()) throw ConfigError(path, lineno, "empty value for key '" + key + "'");
        if (parsed.entries.count(key))
            throw ConfigError(path, lineno,
                              "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(parsed.entries[key].second) + ")");
        parsed.entries[key] = {value, lineno};
    }
    return parsed;
}

RunConfig load_run_config(const ParsedConfig& parsed) {
    ConfigReader reader(parsed);
    RunConfig rc;

    const long long l = reader.require_int("sho.l");
    if (l < 2) reader.fail("sho.l", "need at least two base stations");
    rc.sho.l = static_cast<int>(l);

    const std::string paths_str = reader.require_string("sho.n_paths");
    const auto paths = split(paths_str, ',');
    if (static_cast<int>(paths.size()) == 1) {
        const long long n = reader.parse_int("sho.n_paths", paths[0]);
        rc.sho.n_paths.assign(static_cast<std::size_t>(rc.sho.l), static_cast<int>(n));
    } else if (static_cast<int>(paths.size()) == rc.sho.l) {
        for (const auto& p : paths)
            rc.sho.n_paths.push_back(static_cast<int>(reader.parse_int("sho.n_paths", p)));
    } else {
        reader.fail("sho.n_paths", "expected one count or one per base station");
    }

    rc.sho.n_c = static_cast<int>(reader.require_int("sho.n_c"));
    rc.sho.n_s = static_cast<int>(reader.require_int("sho.n_s"));

    const bool gt_lin = reader.has("sho.gamma_t");
    const bool gt_db = reader.has("sho.gamma_t_db");
    if (gt_lin == gt_db)
        throw ConfigError(parsed.path, 0,
                          "give exactly one of sho.gamma_t (linear) or sho.gamma_t_db");
    rc.sho.gamma_t = gt_lin ? reader.require_double("sho.gamma_t")
                            : db_to_linear(reader.require_double("sho.gamma_t_db"));
    if (!(rc.sho.gamma_t >= 0.0))
        reader.fail(gt_lin ? "sho.gamma_t" : "sho.gamma_t_db", "target SNR must be nonnegative");

    rc.jitter_rel_eps = reader.get_double("pdp.jitter_rel_eps").value_or(1e-9);
    if (!(rc.jitter_rel_eps >= 1e-12 && rc.jitter_rel_eps <= 1e-6))
        reader.fail("pdp.jitter_rel_eps", "must lie in [1e-12, 1e-6]");

    pdp::PdpSpec base_spec = read_pdp_spec(reader, "pdp.", nullptr);
    for (int b = 1; b <= rc.sho.l; ++b) {
        const std::string prefix = "pdp." + std::to_string(b) + ".";
        rc.pdp_specs.push_back(read_pdp_spec(reader, prefix, &base_spec));
    }

    for (int b = 0; b < rc.sho.l; ++b) {
        BranchProfile prof = pdp::make_profile(rc.pdp_specs[static_cast<std::size_t>(b)],
                                               rc.sho.n_paths[static_cast<std::size_t>(b)], b + 1);
        if (static_cast<int>(prof.gammas.size()) != rc.sho.n_paths[static_cast<std::size_t>(b)])
            throw ConfigError(parsed.path, 0,
                              "explicit profile for BS " + std::to_string(b + 1) + " has " +
                                  std::to_string(prof.gammas.size()) +
                                  " values but sho.n_paths requires " +
                                  std::to_string(rc.sho.n_paths[static_cast<std::size_t>(b)]));
        rc.profiles.push_back(pdp::apply_distinctness_jitter(prof, rc.jitter_rel_eps));
    }

    try {
        validate_sho_config(rc.sho, rc.profiles);
    } catch (const std::exception& e) {
        throw ConfigError(parsed.path, 0, e.what());
    }

    const double start_db = reader.require_double("grid.start_db");
    const double stop_db = reader.require_double("grid.stop_db");
    const long long points = reader.require_int("grid.points");
    if (points < 1) reader.fail("grid.points", "need at least one grid point");
    if (!(stop_db > start_db) && points > 1) reader.fail("grid.stop_db", "grid must be increasing");
    for (long long i = 0; i < points; ++i) {
        const double db = points == 1
                              ? start_db
                              : start_db + (stop_db - start_db) * static_cast<double>(i) /
                                               static_cast<double>(points - 1);
        rc.grid_db.push_back(db);
        rc.grid_linear.push_back(db_to_linear(db));
    }

    if (auto samples = reader.get_int("mc.samples")) {
        if (*samples < 10'000) reader.fail("mc.samples", "need at least 10^4 samples");
        rc.mc_samples = static_cast<std::uint64_t>(*samples);
    }
    if (auto seed = reader.get_int("mc.seed")) rc.mc_seed = static_cast<std::uint64_t>(*seed);

    if (auto v = reader.get_double("quadrature.rel_tol")) {
        if (!(*v > 0.0)) reader.fail("quadrature.rel_tol", "must be positive");
        rc.quadrature.rel_tol = *v;
    }
    if (auto v = reader.get_double("quadrature.abs_tol")) {
        if (!(*v > 0.0)) reader.fail("quadrature.abs_tol", "must be positive");
        rc.quadrature.abs_tol = *v;
    }
    if (auto v = reader.get_int("quadrature.max_depth")) {
        if (*v < 1 || *v > 40) reader.fail("quadrature.max_depth", "must lie in [1, 40]");
        rc.quadrature.max_depth = static_cast<int>(*v);
    }

    if (auto out = reader.get_string("output.csv")) rc.out_csv = *out;

    if (auto bs = reader.get_int("stats.bs")) {
        if (*bs < 1 || *bs > rc.sho.l) reader.fail("stats.bs", "base station index out of range");
        rc.stats_bs = static_cast<int>(*bs);
    }
    if (auto pts = reader.get_string("stats.joint.points")) {
        for (const std::string& pair : split(*pts, ';')) {
            const auto yw = split(pair, ':');
            if (yw.size() != 2)
                reader.fail("stats.joint.points", "expected 'y:w' pairs separated by ';'");
            rc.joint_points.emplace_back(reader.parse_double("stats.joint.points", yw[0]),
                                         reader.parse_double("stats.joint.points", yw[1]));
        }
    }
    if (auto bin = reader.get_double("stats.joint.bin")) {
        if (!(*bin > 0.0)) reader.fail("stats.joint.bin", "bin width must be positive");
        rc.joint_bin = *bin;
    }

    reader.reject_unknown();
    return rc;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int worker_count() {
    if (const char* env = std::getenv("SHO_RAKE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hc, 1u, 8u));
}

namespace {

struct CsvWriter {
    std::ostringstream body;
    std::string path;  // "-" or empty writes to stdout

    explicit CsvWriter(std::string out_path) : path(std::move(out_path)) {}

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body << ',';
            body << cells[i];
        }
        body << '\n';
    }

    void comment(const std::string& text) { body << "# " << text << '\n'; }

    void flush(std::ostream& fallback) {
        if (path.empty() || path == "-") {
            fallback << body.str();
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError(path, 0, "cannot open output file for writing");
        out << body.str();
    }
};

void write_metadata(const std::string& csv_path, const ParsedConfig& parsed,
                    const std::string& command, const RunConfig& rc, bool used_mc,
                    double wall_seconds) {
    if (csv_path.empty() || csv_path == "-") return;
    std::ofstream meta(csv_path + ".meta", std::ios::binary);
    if (!meta) return;
    meta << "# shorake run metadata\n";
    meta << "version = " << kVersion << "\n";
    meta << "command = " << command << "\n";
    meta << "config_path = " << parsed.path << "\n";
    meta << "threads = " << worker_count() << "\n";
    if (used_mc) {
        meta << "mc_samples = " << rc.mc_samples << "\n";
        meta << "mc_seed = " << rc.mc_seed << "\n";
    }
    meta << "wall_clock_s = " << format_number(wall_seconds) << "\n";
    meta << "# --- config echo ---\n";
    for (const auto& line : parsed.raw_lines) meta << line << "\n";
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    bool mc_only = false;
    bool cf_only = false;
    bool validate = false;
    std::optional<std::uint64_t> mc_samples;
    std::optional<std::uint64_t> seed;
};

void apply_overrides(RunConfig& rc, const CommonFlags& flags) {
    if (flags.mc_samples) rc.mc_samples = *flags.mc_samples;
    if (flags.seed) rc.mc_seed = *flags.seed;
    if (!flags.out_path.empty()) rc.out_csv = flags.out_path;
}

double normalized_dev(double cf, double mc_value, double mc_se) {
    return std::abs(cf - mc_value) / (3.0 * mc_se + 1e-3);
}

int run_outage(const ParsedConfig& parsed, const CommonFlags& flags, bool as_validate,
               std::ostream& out, std::ostream& err) {
    RunConfig rc = load_run_config(parsed);
    apply_overrides(rc, flags);
    const bool want_cf = !flags.mc_only;
    const bool want_mc = as_validate || flags.validate || flags.mc_only;
    const bool want_dev = want_cf && want_mc;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<OutagePoint> cf;
    if (want_cf) {
        OutageModel model(rc.sho, rc.profiles, rc.quadrature);
        err << "shorake: closed-form outage curve, " << rc.grid_linear.size() << " points, "
            << worker_count() << " workers\n";
        cf = model.outage_curve(rc.grid_linear, worker_count());
    }
    std::vector<mc::McEstimate> mc_est;
    if (want_mc) {
        err << "shorake: monte-carlo outage curve, " << rc.mc_samples << " samples, seed "
            << rc.mc_seed << "\n";
        mc_est = mc::estimate_outage_curve(rc.grid_linear, rc.sho, rc.profiles, rc.mc_samples,
                                           rc.mc_seed);
    }

    CsvWriter csv(rc.out_csv);
    csv.row({"x_db", "x_linear", "closed_form", "mc_value", "mc_std_error", "normalized_dev"});
    double max_dev = 0.0;
    for (std::size_t i = 0; i < rc.grid_linear.size(); ++i) {
        std::vector<std::string> cells(6);
        cells[0] = format_number(rc.grid_db[i]);
        cells[1] = format_number(rc.grid_linear[i]);
        if (want_cf) cells[2] = format_number(cf[i].probability);
        if (want_mc) {
            cells[3] = format_number(mc_est[i].value);
            cells[4] = format_number(mc_est[i].std_error);
        }
        if (want_dev) {
            const double dev =
                normalized_dev(cf[i].probability, mc_est[i].value, mc_est[i].std_error);
            max_dev = std::max(max_dev, dev);
            cells[5] = format_number(dev);
        }
        csv.row(cells);
    }
    if (want_dev) csv.comment("max_normalized_dev = " + format_number(max_dev));
    csv.flush(out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_metadata(rc.out_csv, parsed, as_validate ? "validate" : "outage", rc, want_mc, wall);
    err << "shorake: done in " << format_number(wall) << " s\n";
    if (as_validate) {
        err << "shorake: max normalized deviation = " << format_number(max_dev)
            << (max_dev <= 1.0 ? " (pass)" : " (FAIL)") << "\n";
        return max_dev <= 1.0 ? exit_ok : exit_validation_failed;
    }
    return exit_ok;
}

std::vector<double> statistic_samples(const RunConfig& rc, const std::string& statistic,
                                      int bs_index) {
    const mc::CounterRng rng(rc.mc_seed);
    std::vector<double> samples(rc.mc_samples);
    for (std::uint64_t i = 0; i < rc.mc_samples; ++i) {
        const auto draw = mc::sample_slot(rc.profiles, rng, i);
        if (statistic == "gsc-cdf") {
            const auto sums = mc::serving_block_sums(draw.paths[0], rc.sho.n_c, rc.sho.n_s);
            samples[i] = sums.y + sums.w1;
        } else {
            samples[i] =
                mc::top_block_sum(draw.paths[static_cast<std::size_t>(bs_index)], rc.sho.n_s);
        }
    }
    return samples;
}

int run_stats(const ParsedConfig& parsed, const CommonFlags& flags, const std::string& statistic,
              std::ostream& out, std::ostream& err) {
    RunConfig rc = load_run_config(parsed);
    apply_overrides(rc, flags);
    const bool want_cf = !flags.mc_only;
    const bool want_mc = flags.validate || flags.mc_only;
    const auto t0 = std::chrono::steady_clock::now();

    CsvWriter csv(rc.out_csv);
    double max_dev = 0.0;
    bool have_dev = false;

    if (statistic == "gsc-cdf" || statistic == "wn-cdf") {
        const int bs_index = statistic == "gsc-cdf" ? 0 : rc.stats_bs - 1;
        const int block = statistic == "gsc-cdf" ? rc.sho.n_c : rc.sho.n_s;
        const auto& profile = rc.profiles[static_cast<std::size_t>(bs_index)];
        std::optional<GscDistribution> dist;
        if (want_cf)
            dist.emplace(profile, GscSpec{static_cast<int>(profile.gammas.size()), block});
        std::vector<mc::McEstimate> mc_est;
        if (want_mc) {
            err << "shorake: sampling " << statistic << ", " << rc.mc_samples << " draws, seed "
                << rc.mc_seed << "\n";
            const auto samples = statistic_samples(rc, statistic, bs_index);
            mc_est = mc::empirical_cdf(samples, rc.grid_linear, rc.mc_seed);
        }
        csv.row({"x_db", "x_linear", "closed_form", "mc_value", "mc_std_error", "normalized_dev"});
        for (std::size_t i = 0; i < rc.grid_linear.size(); ++i) {
            std::vector<std::string> cells(6);
            cells[0] = format_number(rc.grid_db[i]);
            cells[1] = format_number(rc.grid_linear[i]);
            if (want_cf) cells[2] = format_number(dist->cdf(rc.grid_linear[i]));
            if (want_mc) {
                cells[3] = format_number(mc_est[i].value);
                cells[4] = format_number(mc_est[i].std_error);
            }
            if (want_cf && want_mc) {
                const double dev = normalized_dev(dist->cdf(rc.grid_linear[i]), mc_est[i].value,
                                                  mc_est[i].std_error);
                max_dev = std::max(max_dev, dev);
                have_dev = true;
                cells[5] = format_number(dev);
            }
            csv.row(cells);
        }
    } else if (statistic == "joint-pdf") {
        if (rc.joint_points.empty())
            throw ConfigError(parsed.path, 0, "joint-pdf requires stats.joint.points");
        const JointDistribution joint(rc.profiles[0], rc.sho.n_c, rc.sho.n_s);
        std::vector<double> ys, ws;
        if (want_mc) {
            err << "shorake: sampling joint density, " << rc.mc_samples << " draws, seed "
                << rc.mc_seed << "\n";
            const mc::CounterRng rng(rc.mc_seed);
            ys.resize(rc.mc_samples);
            ws.resize(rc.mc_samples);
            for (std::uint64_t i = 0; i < rc.mc_samples; ++i) {
                const auto draw = mc::sample_slot(rc.profiles, rng, i);
                const auto sums = mc::serving_block_sums(draw.paths[0], rc.sho.n_c, rc.sho.n_s);
                ys[i] = sums.y;
                ws[i] = sums.w1;
            }
        }
        csv.row({"y_linear", "w_linear", "density", "in_support", "mc_value", "mc_std_error"});
        for (const auto& [y, w] : rc.joint_points) {
            std::vector<std::string> cells(6);
            cells[0] = format_number(y);
            cells[1] = format_number(w);
            const bool in_support =
                y >= 0.0 && w >= 0.0 && w * joint.top_block() <= y * joint.n_s();
            if (want_cf) cells[2] = format_number(joint.pdf(y, w));
            cells[3] = in_support ? "1" : "0";
            if (want_mc) {
                const double half = 0.5 * rc.joint_bin;
                std::uint64_t hits = 0;
                for (std::size_t i = 0; i < ys.size(); ++i)
                    if (std::abs(ys[i] - y) < half && std::abs(ws[i] - w) < half) ++hits;
                const double n = static_cast<double>(rc.mc_samples);
                const double p = static_cast<double>(hits) / n;
                const double area = rc.joint_bin * rc.joint_bin;
                cells[4] = format_number(p / area);
                cells[5] = format_number(std::sqrt(p * (1.0 - p) / n) / area);
            }
            csv.row(cells);
        }
    } else {
        throw ConfigError(parsed.path, 0,
                          "unknown statistic '" + statistic +
                              "' (expected gsc-cdf, wn-cdf or joint-pdf)");
    }

    if (have_dev) csv.comment("max_normalized_dev = " + format_number(max_dev));
    csv.flush(out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_metadata(rc.out_csv, parsed, "stats", rc, want_mc, wall);
    return exit_ok;
}

int run_sweep(const ParsedConfig& parsed, const CommonFlags& flags, const std::string& param,
              const std::vector<double>& values, std::ostream& out, std::ostream& err) {
    if (values.empty() || values.size() > 10)
        throw ConfigError(parsed.path, 0, "sweep expects between 1 and 10 values");
    RunConfig base = load_run_config(parsed);
    apply_overrides(base, flags);
    const bool want_cf = !flags.mc_only;
    const bool want_mc = flags.validate || flags.mc_only;
    const auto t0 = std::chrono::steady_clock::now();

    CsvWriter csv(base.out_csv);
    csv.row({"sweep_param", "sweep_value", "x_db", "x_linear", "closed_form", "mc_value",
             "mc_std_error"});

    for (double value : values) {
        RunConfig rc = base;
        if (param == "delta" || param == "gamma_bar") {
            rc.profiles.clear();
            for (int b = 0; b < rc.sho.l; ++b) {
                pdp::PdpSpec spec = rc.pdp_specs[static_cast<std::size_t>(b)];
                if (spec.kind == pdp::Kind::explicit_values)
                    throw ConfigError(parsed.path, 0,
                                      "cannot sweep '" + param + "' over an explicit profile");
                if (param == "delta") {
                    if (!(value >= 0.0))
                        throw ConfigError(parsed.path, 0, "swept delta must be nonnegative");
                    spec.delta = value;
                    spec.kind = pdp::Kind::exponential;
                } else {
                    if (!(value > 0.0))
                        throw ConfigError(parsed.path, 0, "swept gamma_bar must be positive");
                    spec.gamma_bar = value;
                }
                rc.profiles.push_back(pdp::apply_distinctness_jitter(
                    pdp::make_profile(spec, rc.sho.n_paths[static_cast<std::size_t>(b)], b + 1),
                    rc.jitter_rel_eps));
            }
        } else if (param == "gamma_T") {
            if (!(value >= 0.0))
                throw ConfigError(parsed.path, 0, "swept gamma_T must be nonnegative");
            rc.sho.gamma_t = value;
        } else {
            throw ConfigError(parsed.path, 0,
                              "unknown sweep parameter '" + param +
                                  "' (expected delta, gamma_bar or gamma_T)");
        }

        err << "shorake: sweep " << param << " = " << format_number(value) << "\n";
        std::vector<OutagePoint> cf;
        if (want_cf) {
            OutageModel model(rc.sho, rc.profiles, rc.quadrature);
            cf = model.outage_curve(rc.grid_linear, worker_count());
        }
        std::vector<mc::McEstimate> mc_est;
        if (want_mc)
            mc_est = mc::estimate_outage_curve(rc.grid_linear, rc.sho, rc.profiles, rc.mc_samples,
                                               rc.mc_seed);

        for (std::size_t i = 0; i < rc.grid_linear.size(); ++i) {
            std::vector<std::string> cells(7);
            cells[0] = param;
            cells[1] = format_number(value);
            cells[2] = format_number(rc.grid_db[i]);
            cells[3] = format_number(rc.grid_linear[i]);
            if (want_cf) cells[4] = format_number(cf[i].probability);
            if (want_mc) {
                cells[5] = format_number(mc_est[i].value);
                cells[6] = format_number(mc_est[i].std_error);
            }
            csv.row(cells);
        }
    }
    csv.flush(out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_metadata(base.out_csv, parsed, "sweep", base, want_mc, wall);
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form and Monte-Carlo outage statistics of RAKE finger replacement"};
    app.name("shorake");
    app.require_subcommand(1);

    CommonFlags flags;
    std::string statistic = "gsc-cdf";
    std::string sweep_param;
    std::vector<double> sweep_values;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path, "run configuration file")->required();
        cmd->add_option("--out", flags.out_path, "output CSV path ('-' for stdout)");
        cmd->add_option("--mc-samples", flags.mc_samples, "Monte-Carlo sample count");
        cmd->add_option("--seed", flags.seed, "Monte-Carlo seed");
        cmd->add_flag("--mc-only", flags.mc_only, "skip the closed-form pipeline");
        cmd->add_flag("--cf-only", flags.cf_only, "closed-form only (default)");
        cmd->add_flag("--validate", flags.validate,
                      "run both pipelines and report normalized deviations");
    };

    CLI::App* outage = app.add_subcommand("outage", "outage probability curve");
    add_common(outage);
    CLI::App* stats = app.add_subcommand("stats", "closed-form statistic tables");
    add_common(stats);
    stats->add_option("--statistic", statistic, "gsc-cdf | wn-cdf | joint-pdf");
    CLI::App* sweep = app.add_subcommand("sweep", "outage curves over a parameter sweep");
    add_common(sweep);
    sweep->add_option("--param", sweep_param, "delta | gamma_bar | gamma_T")->required();
    sweep->add_option("--values", sweep_values, "sweep values")->required()->delimiter(',');
    CLI::App* validate = app.add_subcommand("validate", "closed form vs Monte-Carlo check");
    add_common(validate);

    try {
        std::vector<std::string> argv(args);
        std::reverse(argv.begin(), argv.end());
        app.parse(std::move(argv));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "shorake: " << e.what() << "\n";
        return exit_config_error;
    }

    if (flags.mc_only && (flags.cf_only || flags.validate)) {
        err << "shorake: --mc-only conflicts with --cf-only/--validate\n";
        return exit_config_error;
    }

    try {
        const ParsedConfig parsed = parse_config_file(flags.config_path);
        if (outage->parsed()) return run_outage(parsed, flags, false, out, err);
        if (validate->parsed()) return run_outage(parsed, flags, true, out, err);
        if (stats->parsed()) return run_stats(parsed, flags, statistic, out, err);
        if (sweep->parsed()) return run_sweep(parsed, flags, sweep_param, sweep_values, out, err);
        err << "shorake: no subcommand\n";
        return exit_config_error;
    } catch (const ConfigError& e) {
        err << "shorake: " << e.what() << "\n";
        return exit_config_error;
    } catch (const SingularityError& e) {
        err << "shorake: " << e.what()
            << "\n  hint: raise pdp.jitter_rel_eps to separate near-equal path means\n";
        return exit_singularity;
    } catch (const NonConvergenceError& e) {
        err << "shorake: " << e.what() << " (best estimate " << format_number(e.best_estimate)
            << ", achieved error " << format_number(e.achieved_error) << ")\n";
        return exit_non_convergence;
    } catch (const std::exception& e) {
        err << "shorake: " << e.what() << "\n";
        return exit_config_error;
    }
}

}  // namespace shorake::cli
