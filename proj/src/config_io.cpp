// SPDX-License-Identifier: Apache-2.0
//
// sarisac: beamforming design for ISAC with a sensor-aided active RIS
// Copyright (C) 2026 The sarisac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "sarisac/config_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include "sarisac/error.hpp"

namespace sarisac {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"system",
         {"M", "N", "L", "K", "Q", "p_max_dbm", "p_max_w", "gamma_db", "gamma", "a_max", "sigma_d2_dbm",
          "sigma_d2_w", "sigma_r2_dbm", "sigma_r2_w", "sigma_k2_dbm", "sigma_k2_w", "varsigma_t2", "epsilon",
          "max_iters"}},
        {"geometry",
         {"bs_pos", "ris_pos", "user_center", "user_radius", "target_range", "target_azimuth_deg",
          "target_elevation_deg", "reflector_grid", "sensor_grid", "element_spacing"}},
        {"channel", {"rician_k_db", "pathloss_exponent_nlos", "pathloss_exponent_los", "ref_pathloss_db", "seed"}},
        {"experiment",
         {"trials", "threads", "tolerance", "variants", "grid", "thresholds_db", "total_elements", "fixed_ratio"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

class Reader {
  public:
    Reader(std::string source, std::map<std::string, Section> sections)
        : source_(std::move(source)), sections_(std::move(sections)) {}

    const Entry* find(const std::string& sec, const std::string& key) const {
        const auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
    bool has(const std::string& sec, const std::string& key) const { return find(sec, key) != nullptr; }

    [[noreturn]] void fail(const Entry& e, const std::string& sec, const std::string& key,
                           const std::string& what) const {
        throw ConfigError(source_ + ":" + std::to_string(e.line) + ": [" + sec + "] " + key + ": " + what);
    }

    double number(const std::string& sec, const std::string& key, const Entry& e, const std::string& text) const {
        const std::string t = trim(text);
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(t.c_str(), &end);
        if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
            fail(e, sec, key, "expected a number, got '" + t + "'");
        return v;
    }

    void real(const std::string& sec, const std::string& key, double& out) const {
        if (const Entry* e = find(sec, key)) out = number(sec, key, *e, e->value);
    }

    template <class Int>
    void integer(const std::string& sec, const std::string& key, Int& out) const {
        const Entry* e = find(sec, key);
        if (!e) return;
        const std::string t = trim(e->value);
        char* end = nullptr;
        errno = 0;
        if constexpr (std::is_unsigned_v<Int>) {
            const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
            if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE)
                fail(*e, sec, key, "expected a non-negative integer, got '" + t + "'");
            out = static_cast<Int>(v);
        } else {
            const long long v = std::strtoll(t.c_str(), &end, 10);
            if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
                fail(*e, sec, key, "expected an integer, got '" + t + "'");
            out = static_cast<Int>(v);
        }
    }

    std::vector<double> list(const std::string& sec, const std::string& key) const {
        const Entry* e = find(sec, key);
        std::vector<double> out;
        for (const auto& item : split(e->value, ',')) out.push_back(number(sec, key, *e, item));
        if (out.empty()) fail(*e, sec, key, "expected at least one value");
        return out;
    }

    void vec3(const std::string& sec, const std::string& key, Vec3& out) const {
        const Entry* e = find(sec, key);
        if (!e) return;
        const auto v = list(sec, key);
        if (v.size() != 3) fail(*e, sec, key, "expected three comma-separated coordinates");
        out = {v[0], v[1], v[2]};
    }

    bool grid(const std::string& sec, const std::string& key, Grid& out) const {
        const Entry* e = find(sec, key);
        if (!e) return false;
        const auto parts = split(e->value, 'x');
        if (parts.size() != 2) fail(*e, sec, key, "expected ROWSxCOLS, e.g. 8x5");
        int dims[2];
        for (int i = 0; i < 2; ++i) {
            char* end = nullptr;
            const long v = std::strtol(parts[i].c_str(), &end, 10);
            if (parts[i].empty() || end != parts[i].c_str() + parts[i].size())
                fail(*e, sec, key, "expected ROWSxCOLS, e.g. 8x5");
            dims[i] = static_cast<int>(v);
        }
        out = {dims[0], dims[1]};
        return true;
    }

    // Exactly one of the two spellings; returns values converted to watts or linear.
    std::optional<std::vector<double>> either(const std::string& sec, const std::string& log_key,
                                              const std::string& lin_key, double (*from_log)(double)) const {
        const bool a = has(sec, log_key), b = has(sec, lin_key);
        if (a && b) fail(*find(sec, lin_key), sec, lin_key, "conflicts with " + log_key);
        if (b) return list(sec, lin_key);
        if (!a) return std::nullopt;
        auto v = list(sec, log_key);
        for (auto& x : v) x = from_log(x);
        return v;
    }

    std::vector<Variant> variants(const std::string& sec, const std::string& key) const {
        const Entry* e = find(sec, key);
        std::vector<Variant> out;
        for (const auto& item : split(e->value, ',')) {
            const auto kv = split(item, ':');
            if (kv.size() != 2 || kv[0].empty())
                fail(*e, sec, key, "expected label:a_max or label:passive, got '" + item + "'");
            Variant v;
            v.label = kv[0];
            if (kv[1] == "passive") {
                v.passive = true;
                v.a_max = 1.0;
            } else {
                v.a_max = number(sec, key, *e, kv[1]);
            }
            out.push_back(v);
        }
        if (out.empty()) fail(*e, sec, key, "expected at least one variant");
        return out;
    }

  private:
    std::string source_;
    std::map<std::string, Section> sections_;
};

double db_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_watts(double dbm) { return dbm_to_watts(dbm); }

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
    return out;
}

std::vector<double> per_user(const std::vector<double>& v, int K) {
    return v.size() == 1 ? std::vector<double>(K, v[0]) : v;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text, const std::string& source) {
    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&](const std::string& what) -> void {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty() || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header '" + line + "'");
            current = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(current)) fail("unknown section [" + current + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value, got '" + line + "'");
        if (current.empty()) fail("key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().at(current).count(key)) fail("unknown key '" + key + "' in [" + current + "]");
        if (value.empty()) fail("empty value for '" + key + "'");
        if (sections[current].count(key)) fail("duplicate key '" + key + "' in [" + current + "]");
        sections[current][key] = Entry{value, line_no};
    }

    const Reader r(source, std::move(sections));
    ParsedConfig out;
    SystemConfig& c = out.system;
    const double default_gamma = c.gamma.front();
    const double default_noise = c.sigma_k2.front();

    r.integer("system", "M", c.M);
    r.integer("system", "N", c.N);
    r.integer("system", "L", c.L);
    r.integer("system", "K", c.K);
    r.integer("system", "Q", c.Q);
    if (auto v = r.either("system", "p_max_dbm", "p_max_w", dbm_watts)) c.p_max = v->front();
    r.real("system", "a_max", c.a_max);
    if (auto v = r.either("system", "sigma_d2_dbm", "sigma_d2_w", dbm_watts)) c.sigma_d2 = v->front();
    if (auto v = r.either("system", "sigma_r2_dbm", "sigma_r2_w", dbm_watts)) c.sigma_r2 = v->front();
    r.real("system", "varsigma_t2", c.varsigma_t2);
    r.real("system", "epsilon", c.epsilon);
    r.integer("system", "max_iters", c.max_iters);
    const int K = std::max(c.K, 0);
    if (auto v = r.either("system", "gamma_db", "gamma", db_linear)) c.gamma = per_user(*v, K);
    else c.gamma.assign(K, default_gamma);
    if (auto v = r.either("system", "sigma_k2_dbm", "sigma_k2_w", dbm_watts)) c.sigma_k2 = per_user(*v, K);
    else c.sigma_k2.assign(K, default_noise);

    auto& g = c.geometry;
    r.vec3("geometry", "bs_pos", g.bs_pos);
    r.vec3("geometry", "ris_pos", g.ris_pos);
    r.vec3("geometry", "user_center", g.user_center);
    r.real("geometry", "user_radius", g.user_radius);
    r.real("geometry", "target_range", g.target_range);
    r.real("geometry", "target_azimuth_deg", g.target_azimuth_deg);
    r.real("geometry", "target_elevation_deg", g.target_elevation_deg);
    r.real("geometry", "element_spacing", g.element_spacing);
    if (r.grid("geometry", "reflector_grid", g.reflector_grid)) {
        if (!r.has("system", "N")) c.N = g.reflector_grid.size();
    } else if (r.has("system", "N") && c.N >= 1) {
        g.reflector_grid = most_square_grid(c.N);
    }
    if (r.grid("geometry", "sensor_grid", g.sensor_grid)) {
        if (!r.has("system", "L")) c.L = g.sensor_grid.size();
    } else if (r.has("system", "L") && c.L >= 1) {
        g.sensor_grid = most_square_grid(c.L);
    }

    auto& s = c.channel_stats;
    r.real("channel", "rician_k_db", s.rician_k_db);
    r.real("channel", "pathloss_exponent_nlos", s.pathloss_exponent_nlos);
    r.real("channel", "pathloss_exponent_los", s.pathloss_exponent_los);
    r.real("channel", "ref_pathloss_db", s.ref_pathloss_db);
    r.integer("channel", "seed", s.seed);

    auto& e = out.experiment;
    const std::string x = "experiment";
    if (r.has(x, "trials")) r.integer(x, "trials", e.trials.emplace());
    if (r.has(x, "threads")) r.integer(x, "threads", e.threads.emplace());
    if (r.has(x, "tolerance")) r.real(x, "tolerance", e.tolerance.emplace());
    if (r.has(x, "variants")) e.variants = r.variants(x, "variants");
    if (r.has(x, "grid")) e.grid = r.list(x, "grid");
    if (r.has(x, "thresholds_db")) e.thresholds_db = r.list(x, "thresholds_db");
    if (r.has(x, "total_elements")) r.integer(x, "total_elements", e.total_elements.emplace());
    if (r.has(x, "fixed_ratio")) r.real(x, "fixed_ratio", e.fixed_ratio.emplace());

    std::vector<std::string> errs = validation_errors(c);
    if (e.trials && *e.trials < 1) errs.push_back("trials must be >= 1");
    if (e.threads && *e.threads < 1) errs.push_back("threads must be >= 1");
    if (e.tolerance && !(*e.tolerance > 0.0)) errs.push_back("tolerance must be > 0");
    if (!errs.empty()) {
        std::ostringstream os;
        os << source << ": invalid configuration:";
        for (const auto& m : errs) os << "\n  - " << m;
        throw ConfigError(os.str());
    }
    return out;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string emit_config(const ParsedConfig& pc) {
    const SystemConfig& c = pc.system;
    const auto& g = c.geometry;
    const auto& s = c.channel_stats;
    auto v3 = [](const Vec3& v) { return num(v[0]) + ", " + num(v[1]) + ", " + num(v[2]); };
    auto grid = [](const Grid& gr) { return std::to_string(gr.rows) + "x" + std::to_string(gr.cols); };
    std::ostringstream os;
    os << "# effective configuration (watts and linear ratios)\n";
    os << "[system]\n"
       << "M = " << c.M << "\nN = " << c.N << "\nL = " << c.L << "\nK = " << c.K << "\nQ = " << c.Q << '\n'
       << "p_max_w = " << num(c.p_max) << '\n'
       << "gamma = " << join(c.gamma) << '\n'
       << "a_max = " << num(c.a_max) << '\n'
       << "sigma_d2_w = " << num(c.sigma_d2) << '\n'
       << "sigma_r2_w = " << num(c.sigma_r2) << '\n'
       << "sigma_k2_w = " << join(c.sigma_k2) << '\n'
       << "varsigma_t2 = " << num(c.varsigma_t2) << '\n'
       << "epsilon = " << num(c.epsilon) << '\n'
       << "max_iters = " << c.max_iters << "\n\n";
    os << "[geometry]\n"
       << "bs_pos = " << v3(g.bs_pos) << '\n'
       << "ris_pos = " << v3(g.ris_pos) << '\n'
       << "user_center = " << v3(g.user_center) << '\n'
       << "user_radius = " << num(g.user_radius) << '\n'
       << "target_range = " << num(g.target_range) << '\n'
       << "target_azimuth_deg = " << num(g.target_azimuth_deg) << '\n'
       << "target_elevation_deg = " << num(g.target_elevation_deg) << '\n'
       << "reflector_grid = " << grid(g.reflector_grid) << '\n'
       << "sensor_grid = " << grid(g.sensor_grid) << '\n'
       << "element_spacing = " << num(g.element_spacing) << "\n\n";
    os << "[channel]\n"
       << "rician_k_db = " << num(s.rician_k_db) << '\n'
       << "pathloss_exponent_nlos = " << num(s.pathloss_exponent_nlos) << '\n'
       << "pathloss_exponent_los = " << num(s.pathloss_exponent_los) << '\n'
       << "ref_pathloss_db = " << num(s.ref_pathloss_db) << '\n'
       << "seed = " << s.seed << '\n';

    const auto& e = pc.experiment;
    std::ostringstream ex;
    if (e.trials) ex << "trials = " << *e.trials << '\n';
    if (e.threads) ex << "threads = " << *e.threads << '\n';
    if (e.tolerance) ex << "tolerance = " << num(*e.tolerance) << '\n';
    if (e.variants) {
        ex << "variants = ";
        for (std::size_t i = 0; i < e.variants->size(); ++i) {
            const auto& v = (*e.variants)[i];
            ex << (i ? ", " : "") << v.label << ':' << (v.passive ? "passive" : num(v.a_max));
        }
        ex << '\n';
    }
    if (e.grid) ex << "grid = " << join(*e.grid) << '\n';
    if (e.thresholds_db) ex << "thresholds_db = " << join(*e.thresholds_db) << '\n';
    if (e.total_elements) ex << "total_elements = " << *e.total_elements << '\n';
    if (e.fixed_ratio) ex << "fixed_ratio = " << num(*e.fixed_ratio) << '\n';
    if (!ex.str().empty()) os << "\n[experiment]\n" << ex.str();
    return os.str();
}

ExperimentSpec make_spec(ExperimentId id, const ParsedConfig& pc) {
    ExperimentSpec s = ExperimentSpec::defaults(id, pc.system);
    const auto& e = pc.experiment;
    if (e.trials) s.trials = *e.trials;
    if (e.threads) s.threads = *e.threads;
    if (e.tolerance) s.solver_tolerance = *e.tolerance;
    if (e.variants) s.variants = *e.variants;
    if (e.grid) s.grid = *e.grid;
    if (e.thresholds_db) s.thresholds_db = *e.thresholds_db;
    if (e.total_elements) s.total_elements = *e.total_elements;
    if (e.fixed_ratio) s.fixed_ratio = *e.fixed_ratio;
    return s;
}

}  // namespace sarisac
