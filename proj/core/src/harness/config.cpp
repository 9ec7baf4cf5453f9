#include "blackchain/harness/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace blackchain::harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) a++;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) b--;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_bool(const std::string& s, bool& out) {
    if (s == "true" || s == "1") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0") {
        out = false;
        return true;
    }
    return false;
}

std::optional<ConfigError> parse_attack(const std::string& value,
                                        adversary::AttackProfile& out) {
    // space-separated key:value tokens, e.g.
    //   strategy:false_position targets:0,1 offset_m:500 start:100 end:900
    std::istringstream is(value);
    std::string tok;
    bool have_strategy = false;
    while (is >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
            return ConfigError{"attack", "token '" + tok + "' is not key:value"};
        std::string k = tok.substr(0, colon);
        std::string v = tok.substr(colon + 1);
        if (k == "strategy") {
            auto s = adversary::strategy_from_name(v);
            if (!s) return ConfigError{"attack", "unknown strategy '" + v + "'"};
            out.strategy = *s;
            have_strategy = true;
        } else if (k == "targets") {
            for (const auto& part : split(v, ',')) {
                std::uint64_t idx;
                if (!parse_u64(trim(part), idx))
                    return ConfigError{"attack", "bad target index '" + part + "'"};
                out.targets.push_back(static_cast<std::uint32_t>(idx));
            }
        } else if (k == "victim") {
            std::uint64_t idx;
            if (!parse_u64(v, idx)) return ConfigError{"attack", "bad victim index"};
            out.victim = static_cast<std::uint32_t>(idx);
        } else if (k == "offset_m") {
            if (!parse_double(v, out.offset_m)) return ConfigError{"attack", "bad offset_m"};
        } else if (k == "start") {
            if (!parse_u64(v, out.start_tick)) return ConfigError{"attack", "bad start"};
        } else if (k == "end") {
            if (!parse_u64(v, out.end_tick)) return ConfigError{"attack", "bad end"};
        } else {
            return ConfigError{"attack", "unknown attack field '" + k + "'"};
        }
    }
    if (!have_strategy) return ConfigError{"attack", "missing strategy"};
    if (out.targets.empty()) return ConfigError{"attack", "missing targets"};
    return std::nullopt;
}

const std::vector<std::string>& scalar_keys() {
    static const std::vector<std::string> keys = {
        "seed", "ticks", "vehicles", "world_m", "radio_range_m",
        "allow_radio_range_override", "v_max_mps", "detect_tol", "jump_slack_m",
        "pseudonym_window_ticks", "pseudonym_overlap_ticks", "cluster_epoch_ticks",
        "recluster_interval_ticks", "rsu_cell_m", "pow_difficulty_bits", "regions",
        "rsu_link_delay_ticks", "bft_round_ticks", "ma_mine_interval_ticks",
        "heartbeat_mining", "out_dir",
    };
    return keys;
}

} // namespace

bool is_scenario_key(const std::string& key) {
    if (key == "rsu" || key == "attack") return true;
    for (const auto& k : scalar_keys())
        if (k == key) return true;
    return false;
}

std::optional<ConfigError> apply_scenario_key(ScenarioConfig& cfg, const std::string& key,
                                              const std::string& value) {
    auto bad = [&](const char* what) { return ConfigError{key, what}; };

    if (key == "seed") {
        if (!parse_u64(value, cfg.seed)) return bad("expected unsigned integer");
    } else if (key == "ticks") {
        if (!parse_u64(value, cfg.ticks)) return bad("expected unsigned integer");
    } else if (key == "vehicles") {
        std::uint64_t v;
        if (!parse_u64(value, v)) return bad("expected unsigned integer");
        cfg.vehicles = static_cast<std::uint32_t>(v);
    } else if (key == "world_m") {
        if (!parse_double(value, cfg.world_m)) return bad("expected number");
    } else if (key == "radio_range_m") {
        if (!parse_double(value, cfg.radio_range_m)) return bad("expected number");
    } else if (key == "allow_radio_range_override") {
        if (!parse_bool(value, cfg.allow_radio_range_override)) return bad("expected bool");
    } else if (key == "v_max_mps") {
        if (!parse_double(value, cfg.v_max_mps)) return bad("expected number");
    } else if (key == "detect_tol") {
        if (!parse_double(value, cfg.detect_tol)) return bad("expected number");
    } else if (key == "jump_slack_m") {
        if (!parse_double(value, cfg.jump_slack_m)) return bad("expected number");
    } else if (key == "pseudonym_window_ticks") {
        if (!parse_u64(value, cfg.pseudonym_window_ticks)) return bad("expected unsigned integer");
    } else if (key == "pseudonym_overlap_ticks") {
        if (!parse_u64(value, cfg.pseudonym_overlap_ticks)) return bad("expected unsigned integer");
    } else if (key == "cluster_epoch_ticks") {
        if (!parse_u64(value, cfg.cluster_epoch_ticks)) return bad("expected unsigned integer");
    } else if (key == "recluster_interval_ticks") {
        if (!parse_u64(value, cfg.recluster_interval_ticks))
            return bad("expected unsigned integer");
    } else if (key == "rsu_cell_m") {
        if (!parse_double(value, cfg.rsu_cell_m)) return bad("expected number");
    } else if (key == "pow_difficulty_bits") {
        std::uint64_t v;
        if (!parse_u64(value, v)) return bad("expected unsigned integer");
        cfg.pow_difficulty_bits = static_cast<std::uint32_t>(v);
    } else if (key == "regions") {
        std::uint64_t v;
        if (!parse_u64(value, v)) return bad("expected unsigned integer");
        cfg.regions = static_cast<std::uint32_t>(v);
    } else if (key == "rsu_link_delay_ticks") {
        if (!parse_u64(value, cfg.rsu_link_delay_ticks)) return bad("expected unsigned integer");
    } else if (key == "bft_round_ticks") {
        if (!parse_u64(value, cfg.bft_round_ticks)) return bad("expected unsigned integer");
    } else if (key == "ma_mine_interval_ticks") {
        if (!parse_u64(value, cfg.ma_mine_interval_ticks)) return bad("expected unsigned integer");
    } else if (key == "heartbeat_mining") {
        if (!parse_bool(value, cfg.heartbeat_mining)) return bad("expected bool");
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "rsu") {
        auto parts = split(value, ',');
        sim::Position p;
        if (parts.size() != 2 || !parse_double(trim(parts[0]), p.x) ||
            !parse_double(trim(parts[1]), p.y))
            return bad("expected x,y");
        cfg.rsu_positions.push_back(p);
    } else if (key == "attack") {
        adversary::AttackProfile profile;
        auto err = parse_attack(value, profile);
        if (err) return err;
        cfg.attacks.push_back(std::move(profile));
    } else {
        return ConfigError{key, "unknown key"};
    }
    return std::nullopt;
}

std::vector<ConfigError> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<ConfigError> errs;
    auto err = [&](const std::string& key, const std::string& msg) {
        errs.push_back(ConfigError{key, msg});
    };

    if (cfg.ticks == 0) err("ticks", "must be >= 1");
    if (cfg.vehicles == 0) err("vehicles", "must be >= 1");
    if (!(cfg.world_m > 0)) err("world_m", "must be > 0");
    if (!(cfg.radio_range_m > 0)) {
        err("radio_range_m", "must be > 0");
    } else if (!cfg.allow_radio_range_override &&
               (cfg.radio_range_m < sim::RadioModel::kMinRange ||
                cfg.radio_range_m > sim::RadioModel::kMaxRange)) {
        err("radio_range_m", "outside [300, 1000]; set allow_radio_range_override to force");
    }
    if (!(cfg.v_max_mps > 0)) err("v_max_mps", "must be > 0");
    if (cfg.detect_tol < 0) err("detect_tol", "must be >= 0");
    if (cfg.jump_slack_m < 0) err("jump_slack_m", "must be >= 0");
    if (cfg.pseudonym_overlap_ticks == 0) err("pseudonym_overlap_ticks", "must be > 0");
    if (cfg.pseudonym_window_ticks <= 2 * cfg.pseudonym_overlap_ticks)
        err("pseudonym_window_ticks", "must exceed twice the overlap");
    if (cfg.cluster_epoch_ticks < 4)
        err("cluster_epoch_ticks", "must be >= 4 (propose/vote/commit round-trips)");
    if (cfg.recluster_interval_ticks == 0) err("recluster_interval_ticks", "must be >= 1");
    if (!(cfg.rsu_cell_m > 0)) err("rsu_cell_m", "must be > 0");
    if (cfg.pow_difficulty_bits > 28) err("pow_difficulty_bits", "must be <= 28");
    if (cfg.regions == 0) err("regions", "must be >= 1");
    if (cfg.rsu_link_delay_ticks == 0) err("rsu_link_delay_ticks", "must be >= 1");
    if (cfg.bft_round_ticks < 4)
        err("bft_round_ticks", "must be >= 4 (propose/echo/confirm round-trips)");
    if (cfg.ma_mine_interval_ticks == 0) err("ma_mine_interval_ticks", "must be >= 1");
    if (cfg.rsu_positions.empty()) err("rsu", "at least one RSU position required");

    for (const auto& a : cfg.attacks) {
        const bool rsu_strategy = a.strategy == adversary::Strategy::byz_rsu_silent ||
                                  a.strategy == adversary::Strategy::byz_rsu_equivocate;
        const std::size_t limit = rsu_strategy ? cfg.rsu_positions.size() : cfg.vehicles;
        for (auto t : a.targets) {
            if (t >= limit) err("attack", "target index out of range");
        }
        if (a.strategy == adversary::Strategy::bad_mouth && a.victim >= cfg.vehicles)
            err("attack", "victim index out of range");
        if (a.strategy == adversary::Strategy::false_position && !(a.offset_m > 0))
            err("attack", "offset_m must be > 0");
        if (a.start_tick > a.end_tick) err("attack", "start after end");
    }
    return errs;
}

ConfigResult parse_scenario_text(const std::string& text) {
    ConfigResult res;
    ScenarioConfig cfg;
    std::istringstream is(text);
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
            res.errors.push_back(
                ConfigError{"line " + std::to_string(lineno), "expected key = value"});
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        auto err = apply_scenario_key(cfg, key, value);
        if (err) res.errors.push_back(*err);
    }

    // environment overrides for scalar keys: BLACKCHAIN_<KEY>
    for (const auto& key : scalar_keys()) {
        std::string env_name = "BLACKCHAIN_";
        for (char c : key) env_name.push_back(static_cast<char>(std::toupper(c)));
        if (const char* v = std::getenv(env_name.c_str())) {
            auto err = apply_scenario_key(cfg, key, v);
            if (err) res.errors.push_back(ConfigError{key, "env override: " + err->message});
        }
    }

    auto verrs = validate_scenario(cfg);
    res.errors.insert(res.errors.end(), verrs.begin(), verrs.end());
    if (res.errors.empty()) res.config = std::move(cfg);
    return res;
}

ConfigResult load_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        ConfigResult res;
        res.errors.push_back(ConfigError{"file", "cannot open " + path});
        return res;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario_text(ss.str());
}

namespace {

void write_double(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

} // namespace

void write_genesis_file(std::ostream& os, const ledger::GenesisConfig& g) {
    os << "difficulty_bits = " << g.difficulty_bits << "\n";
    os << "rsu_cell_m = ";
    write_double(os, g.rsu_cell_m);
    os << "\n";
    os << "v_max_mps = ";
    write_double(os, g.det.v_max);
    os << "\n";
    os << "detect_tol = ";
    write_double(os, g.det.tol);
    os << "\n";
    os << "jump_slack_m = ";
    write_double(os, g.det.jump_slack);
    os << "\n";
    for (const auto& pk : g.genesis_participants) os << "participant = " << pk.y << "\n";
    for (const auto& [region, pk] : g.anchors.pca_keys)
        os << "pca = " << region << "," << pk.y << "\n";
    for (const auto& [id, reg] : g.rsu_registry) {
        os << "rsu = " << id.index << "," << reg.first.y << ",";
        write_double(os, reg.second.x);
        os << ",";
        write_double(os, reg.second.y);
        os << "\n";
    }
}

GenesisParseResult parse_genesis_text(const std::string& text) {
    GenesisParseResult res;
    ledger::GenesisConfig g;
    std::istringstream is(text);
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
            res.error = "line " + std::to_string(lineno) + ": expected key = value";
            return res;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        auto fail = [&](const std::string& msg) {
            res.error = "line " + std::to_string(lineno) + ": " + msg;
        };

        if (key == "difficulty_bits") {
            std::uint64_t v;
            if (!parse_u64(value, v)) {
                fail("bad difficulty_bits");
                return res;
            }
            g.difficulty_bits = static_cast<std::uint32_t>(v);
        } else if (key == "rsu_cell_m") {
            if (!parse_double(value, g.rsu_cell_m)) {
                fail("bad rsu_cell_m");
                return res;
            }
        } else if (key == "v_max_mps") {
            if (!parse_double(value, g.det.v_max)) {
                fail("bad v_max_mps");
                return res;
            }
        } else if (key == "detect_tol") {
            if (!parse_double(value, g.det.tol)) {
                fail("bad detect_tol");
                return res;
            }
        } else if (key == "jump_slack_m") {
            if (!parse_double(value, g.det.jump_slack)) {
                fail("bad jump_slack_m");
                return res;
            }
        } else if (key == "participant") {
            PublicKey pk;
            if (!parse_u64(value, pk.y)) {
                fail("bad participant key");
                return res;
            }
            g.genesis_participants.push_back(pk);
        } else if (key == "pca") {
            auto parts = split(value, ',');
            std::uint64_t region, pk;
            if (parts.size() != 2 || !parse_u64(trim(parts[0]), region) ||
                !parse_u64(trim(parts[1]), pk)) {
                fail("bad pca entry");
                return res;
            }
            g.anchors.pca_keys[static_cast<std::uint32_t>(region)] = PublicKey{pk};
        } else if (key == "rsu") {
            auto parts = split(value, ',');
            std::uint64_t index, pk;
            sim::Position pos;
            if (parts.size() != 4 || !parse_u64(trim(parts[0]), index) ||
                !parse_u64(trim(parts[1]), pk) || !parse_double(trim(parts[2]), pos.x) ||
                !parse_double(trim(parts[3]), pos.y)) {
                fail("bad rsu entry");
                return res;
            }
            g.rsu_registry[sim::rsu_id(static_cast<std::uint32_t>(index))] = {PublicKey{pk}, pos};
        } else {
            fail("unknown key '" + key + "'");
            return res;
        }
    }
    res.genesis = std::move(g);
    return res;
}

GenesisParseResult load_genesis_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        GenesisParseResult res;
        res.error = "cannot open " + path;
        return res;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_genesis_text(ss.str());
}

} // namespace blackchain::harness
