#include "liouville_lab/liouville_lab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace liouville_lab;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, io = 3 };

bool read_file(const std::string& path, std::string& text) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return !in.bad();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for singular Liouville bubbles"};
    std::string scenario, out_path, format = "json", config_path;
    std::optional<int> N, seed;
    std::optional<double> mu, tol;
    std::string names = "all";
    for (const auto& n : scenario_names()) names += ", " + n;
    app.add_option("--scenario", scenario, "one of: " + names)->required();
    app.add_option("--N", N, "singular order N");
    app.add_option("--mu", mu, "bubble height mu");
    app.add_option("--tol", tol, "quadrature relative tolerance");
    app.add_option("--seed", seed, "seed for randomized sweeps");
    app.add_option("--out", out_path, "report path, '-' for stdout")->required();
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", config_path, "key = value file overriding the defaults");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::usage;
    }

    Config cfg = Config::defaults();
    ParamMap overrides;
    try {
        if (!config_path.empty()) {
            std::string text;
            if (!read_file(config_path, text)) {
                std::cerr << "verify: cannot read config " << config_path << '\n';
                return Exit::io;
            }
            cfg.parse(text);
        }
        if (N) overrides["N"] = std::to_string(*N);
        if (mu) overrides["mu"] = fmt17(*mu);
        if (tol) overrides["tol"] = fmt17(*tol);
        if (seed) overrides["seed"] = std::to_string(*seed);
    } catch (const ConfigError& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return Exit::usage;
    }

    Entries entries;
    try {
        entries = run_scenario(scenario, cfg, overrides);
    } catch (const UnknownScenario& e) {
        std::cerr << "verify: " << e.what() << "\nvalid scenarios: " << names << '\n';
        return Exit::usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return Exit::usage;
    }

    std::ostringstream buf;
    if (format == "json")
        emit_json(buf, entries);
    else
        emit_csv(buf, entries);
    if (out_path == "-") {
        std::cout << buf.str() << std::flush;
        if (!std::cout) return Exit::io;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "verify: cannot write " << out_path << '\n';
            return Exit::io;
        }
        out << buf.str();
        out.close();
        if (!out) {
            std::cerr << "verify: write failed for " << out_path << '\n';
            return Exit::io;
        }
    }
    size_t bad = 0;
    for (const auto& e : entries)
        if (!e.pass) {
            ++bad;
            std::cerr << "FAIL " << e.check_id;
            for (const auto& [k, v] : e.params) std::cerr << ' ' << k << '=' << v;
            std::cerr << " measured=" << fmt17(e.measured) << " expected=" << fmt17(e.expected) << '\n';
        }
    std::cerr << entries.size() << " entries, " << bad << " failed\n";
    return bad == 0 ? Exit::ok : Exit::failed;
}
