#include "aoidl/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "aoidl/error.hpp"

namespace aoidl {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"receiver", {"noise_power_dbm", "noise_power_w"}},
        {"link1",
         {"tx_power_dbm", "tx_power_w", "distance_m", "path_loss_exp", "fading_scale",
          "sinr_threshold_db", "sinr_threshold_linear"}},
        {"link2",
         {"tx_power_dbm", "tx_power_w", "distance_m", "path_loss_exp", "fading_scale",
          "sinr_threshold_db", "sinr_threshold_linear"}},
        {"system", {"q1", "q2", "arrival_prob", "deadline"}},
        {"sim", {"slots", "warmup_slots", "seed", "replications", "mode"}},
        {"sweep", {"axis", "values", "with_sim"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> to_double(std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> to_unsigned(std::string_view text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
    return v;
}

// Collects every problem in the document before failing, so a user sees all
// offending fields at once.
class Reader {
public:
    Reader(const pt::ptree& tree, std::string_view source) : tree_(tree), source_(source) {}

    bool has(const std::string& section, const std::string& key) const {
        const auto s = tree_.get_child_optional(section);
        return s && s->get_child_optional(pt::ptree::path_type(key, '\0'));
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto s = tree_.get_child_optional(section);
        if (!s) return std::nullopt;
        const auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return trim(*v);
    }

    std::optional<double> number(const std::string& section, const std::string& key) {
        const auto text = raw(section, key);
        if (!text) return std::nullopt;
        const auto v = to_double(*text);
        if (!v || !std::isfinite(*v)) fail(section, key, "expected a finite number, got '" + *text + "'");
        return v;
    }

    std::optional<std::uint64_t> count(const std::string& section, const std::string& key) {
        const auto text = raw(section, key);
        if (!text) return std::nullopt;
        const auto v = to_unsigned(*text);
        if (!v) fail(section, key, "expected a non-negative integer, got '" + *text + "'");
        return v;
    }

    double required(const std::string& section, const std::string& key) {
        if (!has(section, key)) {
            fail(section, key, "missing");
            return 0.0;
        }
        return number(section, key).value_or(0.0);
    }

    // Exactly one of two unit-suffixed spellings must be present.
    double one_of(const std::string& section, const std::string& key_a, double (*convert_a)(double),
                  const std::string& key_b) {
        const bool a = has(section, key_a);
        const bool b = has(section, key_b);
        if (a && b) {
            fail(section, key_a, "conflicts with " + key_b + "; give exactly one unit");
            return 0.0;
        }
        if (!a && !b) {
            fail(section, key_a + " / " + key_b, "missing (a unit suffix is required)");
            return 0.0;
        }
        if (a) {
            const auto v = number(section, key_a);
            return v ? convert_a(*v) : 0.0;
        }
        return number(section, key_b).value_or(0.0);
    }

    void fail(const std::string& section, const std::string& key, const std::string& why) {
        problems_.push_back(section + "." + key + ": " + why);
    }

    void check_positive(const std::string& field, double v) {
        if (!(v > 0.0)) problems_.push_back(field + ": must be positive");
    }

    void check_probability(const std::string& field, double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream os;
            os << field << ": must lie in [0, 1], got " << v;
            problems_.push_back(os.str());
        }
    }

    void throw_if_failed(ErrorKind kind) const {
        if (problems_.empty()) return;
        std::string msg = std::string(source_) + ": invalid scenario";
        for (const auto& p : problems_) msg += "\n  " + p;
        throw Error(kind, msg);
    }

    bool failed() const { return !problems_.empty(); }

private:
    const pt::ptree& tree_;
    std::string_view source_;
    std::vector<std::string> problems_;
};

LinkParams read_link(Reader& r, const std::string& section) {
    LinkParams link;
    link.tx_power_w = r.one_of(section, "tx_power_dbm", dbm_to_watts, "tx_power_w");
    link.distance_m = r.required(section, "distance_m");
    link.path_loss_exp = r.required(section, "path_loss_exp");
    link.fading_scale = r.number(section, "fading_scale").value_or(1.0);
    link.sinr_threshold =
        r.one_of(section, "sinr_threshold_db", db_to_linear, "sinr_threshold_linear");
    r.check_positive(section + ".tx_power", link.tx_power_w);
    r.check_positive(section + ".distance_m", link.distance_m);
    r.check_positive(section + ".path_loss_exp", link.path_loss_exp);
    r.check_positive(section + ".fading_scale", link.fading_scale);
    r.check_positive(section + ".sinr_threshold", link.sinr_threshold);
    return link;
}

}  // namespace

std::vector<double> parse_value_list(std::string_view text) {
    const std::string t = trim(text);
    detail::require(!t.empty(), ErrorKind::invalid_config, "empty value list");
    std::vector<double> out;

    if (t.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ':')) {
            const auto v = to_double(item);
            detail::require(v.has_value(), ErrorKind::invalid_config, "bad range component '" + item + "'");
            parts.push_back(*v);
        }
        detail::require(parts.size() == 3 && parts[1] > 0.0 && parts[2] >= parts[0],
                        ErrorKind::invalid_config, "range must be start:step:stop with step > 0");
        const auto n = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
        for (long i = 0; i <= n; ++i) {
            const double v = parts[0] + static_cast<double>(i) * parts[1];
            out.push_back(std::round(v * 1e12) / 1e12);
        }
        return out;
    }

    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = to_double(item);
        detail::require(v.has_value(), ErrorKind::invalid_config, "bad value '" + trim(item) + "'");
        out.push_back(*v);
    }
    return out;
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorKind::parse_error, std::string(source) + ":" + std::to_string(e.line()) +
                                                ": " + e.message());
    }

    Reader r(tree, source);
    for (const auto& [section, body] : tree) {
        const auto it = allowed_keys().find(section);
        if (body.empty() && !body.data().empty()) {
            r.fail(section, "", "key outside any section");
            continue;
        }
        if (it == allowed_keys().end()) {
            r.fail(section, "*", "unknown section");
            continue;
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) r.fail(section, key, "unknown key");
        }
    }
    r.throw_if_failed(ErrorKind::invalid_config);

    Scenario s;
    s.params.rx.noise_power_w = r.one_of("receiver", "noise_power_dbm", dbm_to_watts, "noise_power_w");
    r.check_positive("receiver.noise_power", s.params.rx.noise_power_w);
    s.params.link1 = read_link(r, "link1");
    s.params.link2 = read_link(r, "link2");

    s.params.q1 = r.required("system", "q1");
    s.params.q2 = r.required("system", "q2");
    s.params.arrival_prob = r.required("system", "arrival_prob");
    r.check_probability("system.q1", s.params.q1);
    r.check_probability("system.q2", s.params.q2);
    r.check_probability("system.arrival_prob", s.params.arrival_prob);
    if (!r.has("system", "deadline")) {
        r.fail("system", "deadline", "missing");
    } else if (const auto d = r.count("system", "deadline")) {
        if (*d < 1 || *d > 100000) r.fail("system", "deadline", "must be an integer in [1, 100000]");
        s.params.deadline = static_cast<int>(*d);
    }

    s.sim.slots = r.count("sim", "slots").value_or(s.sim.slots);
    s.sim.warmup_slots = r.count("sim", "warmup_slots").value_or(s.sim.slots / 10);
    s.sim.seed = r.count("sim", "seed").value_or(s.sim.seed);
    s.sim.replications = static_cast<std::uint32_t>(r.count("sim", "replications").value_or(1));
    if (const auto mode = r.raw("sim", "mode")) {
        try {
            s.sim.mode = parse_sim_mode(*mode);
        } catch (const Error& e) {
            r.fail("sim", "mode", e.what());
        }
    }
    if (s.sim.slots <= s.sim.warmup_slots) r.fail("sim", "slots", "must exceed warmup_slots");
    if (s.sim.replications < 1) r.fail("sim", "replications", "must be >= 1");

    if (const auto axis = r.raw("sweep", "axis")) {
        try {
            s.sweep.axis = parse_axis(*axis);
        } catch (const Error& e) {
            r.fail("sweep", "axis", e.what());
        }
    }
    if (const auto values = r.raw("sweep", "values")) {
        try {
            s.sweep.values = parse_value_list(*values);
        } catch (const Error& e) {
            r.fail("sweep", "values", e.what());
        }
    }
    if (const auto with_sim = r.raw("sweep", "with_sim")) {
        if (*with_sim == "true" || *with_sim == "1") {
            s.sweep.with_sim = true;
        } else if (*with_sim != "false" && *with_sim != "0") {
            r.fail("sweep", "with_sim", "expected true or false");
        }
    }

    r.throw_if_failed(ErrorKind::invalid_config);
    s.params.validate();
    s.sim.params = s.params;
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot read scenario file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

}  // namespace aoidl
