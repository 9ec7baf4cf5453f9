#include "blackchain/harness/runner.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace blackchain::harness {

namespace fs = std::filesystem;

RunOutcome run_scenario(const ScenarioConfig& cfg) {
    RunOutcome out;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) {
        out.error = "cannot create output directory " + cfg.out_dir;
        return out;
    }

    std::ofstream events(fs::path(cfg.out_dir) / "events.log");
    Simulation sim(cfg, &events);
    SimulationResult result = sim.run();

    const fs::path chain_path = fs::path(cfg.out_dir) / "chain.bin";
    {
        std::ofstream chain(chain_path, std::ios::binary);
        ledger::write_chain_file(chain, result.chain);
    }
    {
        std::ofstream chain_txt(fs::path(cfg.out_dir) / "chain.txt");
        ledger::export_chain_text(chain_txt, result.chain);
    }
    const fs::path genesis_path = fs::path(cfg.out_dir) / "genesis.cfg";
    {
        std::ofstream genesis(genesis_path);
        write_genesis_file(genesis, result.genesis);
    }
    {
        std::ofstream metrics(fs::path(cfg.out_dir) / "metrics.csv");
        write_metrics_csv(metrics, result.metrics);
    }
    auto services = sim.region_services();
    for (const auto* region : services) {
        std::ofstream audit(fs::path(cfg.out_dir) /
                            ("audit_region" + std::to_string(region->region()) + ".csv"));
        region->write_audit_csv(audit);
    }

    out.ok = true;
    out.metrics = result.metrics;
    out.chain_path = chain_path.string();
    out.genesis_path = genesis_path.string();
    return out;
}

AuditOutcome audit_chain_bytes(const std::vector<std::uint8_t>& bytes,
                               const ledger::GenesisConfig& genesis) {
    AuditOutcome out;
    auto parsed = ledger::parse_chain_file(bytes);
    if (!parsed.ok) {
        out.status = AuditStatus::parse_error;
        out.message = "parse error: " + parsed.error;
        return out;
    }
    out.verdict = ledger::verify_chain(parsed.chain, genesis);
    if (out.verdict.ok) {
        out.status = AuditStatus::verified;
        out.message = "chain verified: " + std::to_string(parsed.chain.size()) + " blocks";
    } else {
        out.status = AuditStatus::invalid;
        std::ostringstream os;
        os << "verification failed at block " << out.verdict.block_height << " tx "
           << out.verdict.tx_index << ": " << ledger::chain_fail_name(out.verdict.reason);
        if (!out.verdict.detail.empty()) os << " (" << out.verdict.detail << ")";
        out.message = os.str();
    }
    return out;
}

AuditOutcome audit_chain_file(const std::string& chain_path, const std::string& genesis_path) {
    AuditOutcome out;
    auto genesis = load_genesis_file(genesis_path);
    if (!genesis.ok()) {
        out.status = AuditStatus::parse_error;
        out.message = "genesis: " + genesis.error;
        return out;
    }
    std::ifstream f(chain_path, std::ios::binary);
    if (!f) {
        out.status = AuditStatus::parse_error;
        out.message = "cannot open " + chain_path;
        return out;
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return audit_chain_bytes(bytes, *genesis.genesis);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) a++;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) b--;
    return s.substr(a, b - a);
}

} // namespace

SweepOutcome run_sweep(const ScenarioConfig& base, const std::string& grid_text,
                       std::ostream& csv_out) {
    SweepOutcome out;

    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    std::istringstream is(grid_text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            out.error = "grid line " + std::to_string(lineno) + ": expected key = v1,v2,...";
            return out;
        }
        std::string key = trim(line.substr(0, eq));
        if (!is_scenario_key(key) || key == "rsu" || key == "attack") {
            out.error = "grid key '" + key + "' is not a sweepable scenario key";
            return out;
        }
        std::vector<std::string> values;
        std::string v;
        std::istringstream vs(line.substr(eq + 1));
        while (std::getline(vs, v, ',')) {
            v = trim(v);
            if (!v.empty()) values.push_back(v);
        }
        if (values.empty()) {
            out.error = "grid key '" + key + "' has no values";
            return out;
        }
        axes.emplace_back(key, values);
    }

    std::size_t combos = 1;
    for (const auto& [k, vs] : axes) combos *= vs.size();

    csv_out << "combo";
    for (const auto& [k, vs] : axes) csv_out << ',' << k;
    csv_out << ',' << RunMetrics::csv_header() << '\n';

    for (std::size_t c = 0; c < combos; c++) {
        ScenarioConfig cfg = base;
        std::size_t rem = c;
        std::vector<std::string> chosen;
        for (const auto& [key, values] : axes) {
            const std::string& value = values[rem % values.size()];
            rem /= values.size();
            chosen.push_back(value);
            auto err = apply_scenario_key(cfg, key, value);
            if (err) {
                out.error = "combo " + std::to_string(c) + ": " + err->key + ": " + err->message;
                return out;
            }
        }
        auto verrs = validate_scenario(cfg);
        if (!verrs.empty()) {
            out.error = "combo " + std::to_string(c) + ": " + verrs.front().key + ": " +
                        verrs.front().message;
            return out;
        }
        cfg.out_dir = base.out_dir + "/combo_" + std::to_string(c);

        auto run = run_scenario(cfg);
        if (!run.ok) {
            out.error = "combo " + std::to_string(c) + ": " + run.error;
            return out;
        }
        csv_out << c;
        for (const auto& v : chosen) csv_out << ',' << v;
        csv_out << ',' << run.metrics.csv_row() << '\n';
        out.rows++;
    }

    out.ok = true;
    return out;
}

} // namespace blackchain::harness
