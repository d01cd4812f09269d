#include "aoidl/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aoidl/error.hpp"

namespace aoidl {

namespace {

using nlohmann::json;

double parse_number(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorKind::parse_error, "bad number '" + std::string(text) + "'");
    }
    return v;
}

template <typename Int>
Int parse_integer(std::string_view text) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorKind::parse_error, "bad integer '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

json number_to_json(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return json{{"unbounded", true}, {"sign", v > 0 ? 1 : -1}};
    return v;
}

double number_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_object()) {
        if (!j.value("unbounded", false)) throw Error(ErrorKind::parse_error, "bad tagged number");
        return j.value("sign", 1) * std::numeric_limits<double>::infinity();
    }
    return j.get<double>();
}

struct Column {
    std::string name;
    bool simulation = false;
    std::function<std::string(const ResultRow&)> to_text;
    std::function<void(ResultRow&, std::string_view)> from_text;
    std::function<json(const ResultRow&)> to_json;
    std::function<void(ResultRow&, const json&)> from_json;
};

// `ref` is a generic lambda returning a reference to the field, usable on
// both const and mutable rows.
template <typename Ref>
Column number_column(std::string name, bool sim, Ref ref) {
    return Column{
        std::move(name), sim,
        [ref](const ResultRow& r) { return format_number(ref(r)); },
        [ref](ResultRow& r, std::string_view t) { ref(r) = parse_number(t); },
        [ref](const ResultRow& r) { return number_to_json(ref(r)); },
        [ref](ResultRow& r, const json& j) { ref(r) = number_from_json(j); },
    };
}

template <typename Ref>
Column integer_column(std::string name, bool sim, Ref ref) {
    using Int = std::remove_cvref_t<decltype(ref(std::declval<ResultRow&>()))>;
    return Column{
        std::move(name), sim,
        [ref](const ResultRow& r) { return std::to_string(ref(r)); },
        [ref](ResultRow& r, std::string_view t) { ref(r) = parse_integer<Int>(t); },
        [ref](const ResultRow& r) { return json(ref(r)); },
        [ref](ResultRow& r, const json& j) { ref(r) = j.get<Int>(); },
    };
}

template <typename Ref, typename ToText, typename FromText>
Column text_column(std::string name, bool sim, Ref ref, ToText to, FromText from) {
    return Column{
        std::move(name), sim,
        [ref, to](const ResultRow& r) { return std::string(to(ref(r))); },
        [ref, from](ResultRow& r, std::string_view t) { ref(r) = from(t); },
        [ref, to](const ResultRow& r) { return json(std::string(to(ref(r)))); },
        [ref, from](ResultRow& r, const json& j) { ref(r) = from(j.get<std::string>()); },
    };
}

template <typename Ref>
Column list_column(std::string name, bool sim, Ref ref) {
    using Vec = std::remove_cvref_t<decltype(ref(std::declval<ResultRow&>()))>;
    using Elem = typename Vec::value_type;
    return Column{
        std::move(name), sim,
        [ref](const ResultRow& r) {
            std::string out;
            for (const auto& v : ref(r)) {
                if (!out.empty()) out += ';';
                if constexpr (std::is_floating_point_v<Elem>) {
                    out += format_number(v);
                } else {
                    out += std::to_string(v);
                }
            }
            return out;
        },
        [ref](ResultRow& r, std::string_view t) {
            Vec values;
            if (!t.empty()) {
                for (auto part : split(t, ';')) {
                    if constexpr (std::is_floating_point_v<Elem>) {
                        values.push_back(parse_number(part));
                    } else {
                        values.push_back(parse_integer<Elem>(part));
                    }
                }
            }
            ref(r) = std::move(values);
        },
        [ref](const ResultRow& r) {
            json out = json::array();
            for (const auto& v : ref(r)) {
                if constexpr (std::is_floating_point_v<Elem>) {
                    out.push_back(number_to_json(v));
                } else {
                    out.push_back(v);
                }
            }
            return out;
        },
        [ref](ResultRow& r, const json& j) {
            Vec values;
            for (const auto& v : j) {
                if constexpr (std::is_floating_point_v<Elem>) {
                    values.push_back(number_from_json(v));
                } else {
                    values.push_back(v.get<Elem>());
                }
            }
            ref(r) = std::move(values);
        },
    };
}

Column violation_column(std::string name, bool sim, int x, bool ci) {
    auto vec = [sim, ci](auto& r) -> auto& {
        if (!sim) return r.analytical.aoi_violation;
        return ci ? r.simulation->aoi_violation_ci : r.simulation->aoi_violation;
    };
    auto ref = [vec, x](auto& r) -> auto& { return vec(r)[static_cast<std::size_t>(x)]; };
    Column c = number_column(std::move(name), sim, ref);
    // Size the vector before element assignment when reading.
    auto text_setter = c.from_text;
    auto json_setter = c.from_json;
    c.from_text = [vec, text_setter](ResultRow& r, std::string_view t) {
        vec(r).resize(kViolationHorizon + 1);
        text_setter(r, t);
    };
    c.from_json = [vec, json_setter](ResultRow& r, const json& j) {
        vec(r).resize(kViolationHorizon + 1);
        json_setter(r, j);
    };
    return c;
}

MprClass parse_mpr(std::string_view t) {
    if (t == "strong") return MprClass::strong;
    if (t == "weak") return MprClass::weak;
    throw Error(ErrorKind::parse_error, "bad MPR class '" + std::string(t) + "'");
}

void add_link_columns(std::vector<Column>& cols, const std::string& prefix, LinkParams SystemParams::*link) {
    cols.push_back(number_column(prefix + "_tx_power_w", false,
                                 [link](auto& r) -> auto& { return (r.params.*link).tx_power_w; }));
    cols.push_back(number_column(prefix + "_distance_m", false,
                                 [link](auto& r) -> auto& { return (r.params.*link).distance_m; }));
    cols.push_back(number_column(prefix + "_path_loss_exp", false,
                                 [link](auto& r) -> auto& { return (r.params.*link).path_loss_exp; }));
    cols.push_back(number_column(prefix + "_fading_scale", false,
                                 [link](auto& r) -> auto& { return (r.params.*link).fading_scale; }));
    cols.push_back(number_column(prefix + "_sinr_threshold", false,
                                 [link](auto& r) -> auto& { return (r.params.*link).sinr_threshold; }));
}

const std::vector<Column>& columns() {
    static const std::vector<Column> cols = [] {
        std::vector<Column> c;
        c.push_back(text_column(
            "axis", false, [](auto& r) -> auto& { return r.axis; },
            [](const std::string& s) { return s; }, [](std::string_view t) { return std::string(t); }));
        c.push_back(number_column("axis_value", false, [](auto& r) -> auto& { return r.axis_value; }));

        c.push_back(number_column("q1", false, [](auto& r) -> auto& { return r.params.q1; }));
        c.push_back(number_column("q2", false, [](auto& r) -> auto& { return r.params.q2; }));
        c.push_back(number_column("arrival_prob", false,
                                  [](auto& r) -> auto& { return r.params.arrival_prob; }));
        c.push_back(integer_column("deadline", false, [](auto& r) -> auto& { return r.params.deadline; }));
        add_link_columns(c, "link1", &SystemParams::link1);
        add_link_columns(c, "link2", &SystemParams::link2);
        c.push_back(number_column("noise_power_w", false,
                                  [](auto& r) -> auto& { return r.params.rx.noise_power_w; }));

        c.push_back(number_column("p_1_solo", false, [](auto& r) -> auto& { return r.analytical.sp.p_1_solo; }));
        c.push_back(number_column("p_1_joint", false, [](auto& r) -> auto& { return r.analytical.sp.p_1_joint; }));
        c.push_back(number_column("p_2_solo", false, [](auto& r) -> auto& { return r.analytical.sp.p_2_solo; }));
        c.push_back(number_column("p_2_joint", false, [](auto& r) -> auto& { return r.analytical.sp.p_2_joint; }));
        c.push_back(number_column("p1", false, [](auto& r) -> auto& { return r.analytical.p1; }));
        c.push_back(number_column("p2", false, [](auto& r) -> auto& { return r.analytical.p2; }));
        c.push_back(number_column("mu1", false, [](auto& r) -> auto& { return r.analytical.mu1; }));
        c.push_back(number_column("mu2", false, [](auto& r) -> auto& { return r.analytical.mu2; }));
        c.push_back(number_column("delta", false, [](auto& r) -> auto& { return r.analytical.delta; }));
        c.push_back(text_column(
            "mpr_class", false, [](auto& r) -> auto& { return r.analytical.mpr; },
            [](MprClass m) { return to_string(m); }, parse_mpr));
        c.push_back(list_column("stationary", false,
                                [](auto& r) -> auto& { return r.analytical.queue.stationary.probs; }));
        c.push_back(number_column("busy_prob", false, [](auto& r) -> auto& { return r.analytical.queue.busy_prob; }));
        c.push_back(number_column("drop_rate", false, [](auto& r) -> auto& { return r.analytical.queue.drop_rate; }));
        c.push_back(number_column("per_packet_drop_prob", false,
                                  [](auto& r) -> auto& { return r.analytical.queue.per_packet_drop_prob; }));
        c.push_back(number_column("throughput_derived", false,
                                  [](auto& r) -> auto& { return r.analytical.queue.throughput; }));
        c.push_back(number_column("aoi_average", false, [](auto& r) -> auto& { return r.analytical.aoi_average; }));
        for (int x = 0; x <= kViolationHorizon; ++x) {
            c.push_back(violation_column("aoi_violation_x" + std::to_string(x), false, x, false));
        }

        // Simulation columns; empty cells when no simulation was run.
        c.push_back(text_column(
            "sim_mode", true, [](auto& r) -> auto& { return r.simulation->mode; },
            [](SimMode m) { return to_string(m); }, parse_sim_mode));
        c.push_back(integer_column("sim_seed", true, [](auto& r) -> auto& { return r.simulation->seed; }));
        c.push_back(integer_column("sim_slots", true, [](auto& r) -> auto& { return r.simulation->slots; }));
        c.push_back(integer_column("sim_warmup_slots", true,
                                   [](auto& r) -> auto& { return r.simulation->warmup_slots; }));
        c.push_back(integer_column("sim_replications", true,
                                   [](auto& r) -> auto& { return r.simulation->replications; }));
        c.push_back(number_column("sim_drop_rate", true, [](auto& r) -> auto& { return r.simulation->drop_rate; }));
        c.push_back(number_column("sim_drop_rate_ci", true,
                                  [](auto& r) -> auto& { return r.simulation->drop_rate_ci; }));
        c.push_back(number_column("sim_throughput", true, [](auto& r) -> auto& { return r.simulation->throughput; }));
        c.push_back(number_column("sim_throughput_ci", true,
                                  [](auto& r) -> auto& { return r.simulation->throughput_ci; }));
        c.push_back(number_column("sim_busy_prob", true, [](auto& r) -> auto& { return r.simulation->busy_prob; }));
        c.push_back(number_column("sim_busy_prob_ci", true,
                                  [](auto& r) -> auto& { return r.simulation->busy_prob_ci; }));
        c.push_back(number_column("sim_per_packet_drop_prob", true,
                                  [](auto& r) -> auto& { return r.simulation->per_packet_drop_prob; }));
        c.push_back(number_column("sim_per_packet_drop_prob_ci", true,
                                  [](auto& r) -> auto& { return r.simulation->per_packet_drop_prob_ci; }));
        c.push_back(number_column("sim_aoi_average", true, [](auto& r) -> auto& { return r.simulation->aoi_average; }));
        c.push_back(number_column("sim_aoi_average_ci", true,
                                  [](auto& r) -> auto& { return r.simulation->aoi_average_ci; }));
        for (int x = 0; x <= kViolationHorizon; ++x) {
            c.push_back(violation_column("sim_aoi_violation_x" + std::to_string(x), true, x, false));
        }
        for (int x = 0; x <= kViolationHorizon; ++x) {
            c.push_back(violation_column("sim_aoi_violation_x" + std::to_string(x) + "_ci", true, x, true));
        }
        c.push_back(list_column("sim_aoi_histogram", true,
                                [](auto& r) -> auto& { return r.simulation->aoi_histogram; }));
        c.push_back(list_column("sim_occupancy", true,
                                [](auto& r) -> auto& { return r.simulation->waiting_time_occupancy; }));
        return c;
    }();
    return cols;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<std::string> csv_columns() {
    std::vector<std::string> names;
    for (const auto& c : columns()) names.push_back(c.name);
    return names;
}

std::string rows_to_csv(std::span<const ResultRow> rows) {
    std::string out;
    const auto& cols = columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i].name;
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out += ',';
            if (!cols[i].simulation || row.simulation) out += cols[i].to_text(row);
        }
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> rows_from_csv(std::string_view text) {
    const auto& cols = columns();
    auto lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    detail::require(!lines.empty(), ErrorKind::parse_error, "CSV has no header row");

    const auto header = split(lines.front(), ',');
    detail::require(header.size() == cols.size(), ErrorKind::parse_error,
                    "CSV header does not match schema version " + std::to_string(kSchemaVersion));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        detail::require(header[i] == cols[i].name, ErrorKind::parse_error,
                        "unexpected CSV column '" + std::string(header[i]) + "'");
    }

    std::vector<ResultRow> rows;
    for (std::size_t line = 1; line < lines.size(); ++line) {
        const auto cells = split(lines[line], ',');
        detail::require(cells.size() == cols.size(), ErrorKind::parse_error,
                        "CSV line " + std::to_string(line + 1) + " has " +
                            std::to_string(cells.size()) + " cells");
        ResultRow row;
        bool has_sim = false;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i].simulation) {
                if (cols[i].name == "sim_mode") {
                    has_sim = !cells[i].empty();
                    if (has_sim) row.simulation.emplace();
                }
                if (!has_sim) continue;
            }
            try {
                cols[i].from_text(row, cells[i]);
            } catch (const Error& e) {
                throw Error(ErrorKind::parse_error, "CSV line " + std::to_string(line + 1) +
                                                        ", column " + cols[i].name + ": " + e.what());
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string rows_to_json(std::span<const ResultRow> rows) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["rows"] = json::array();
    for (const auto& row : rows) {
        json j = json::object();
        json sim = row.simulation ? json::object() : json(nullptr);
        for (const auto& c : columns()) {
            if (!c.simulation) {
                j[c.name] = c.to_json(row);
            } else if (row.simulation) {
                sim[c.name] = c.to_json(row);
            }
        }
        j["simulation"] = std::move(sim);
        doc["rows"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
    detail::require(doc.value("schema_version", 0) == kSchemaVersion, ErrorKind::parse_error,
                    "unsupported JSON schema version");

    std::vector<ResultRow> rows;
    try {
        for (const auto& j : doc.at("rows")) {
            ResultRow row;
            const json& sim = j.at("simulation");
            if (!sim.is_null()) row.simulation.emplace();
            for (const auto& c : columns()) {
                if (!c.simulation) {
                    c.from_json(row, j.at(c.name));
                } else if (row.simulation) {
                    c.from_json(row, sim.at(c.name));
                }
            }
            rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
    return rows;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io_error, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::io_error, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::io_error, "cannot move output into " + path.string());
    }
}

}  // namespace aoidl
