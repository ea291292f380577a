#include "dcprot/settings/groups.hpp"

#include "dcprot/common.hpp"
#include "dcprot/doc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dcprot::settings {

namespace {

/// Group index of a table value: uniform bins of width w descending from the
/// maximum, half-open [lower, upper) except the topmost bin which includes
/// the maximum itself.
int bin_of(double value, double max, double width) {
    return std::max(1, static_cast<int>(std::ceil((max - value) / width)));
}

std::string format_amps(double v) { return strformat("%.10g", v); }

std::string join_ids(const std::set<std::string>& ids) {
    if (ids.empty()) return "-";
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ',';
        out += id;
    }
    return out;
}

std::set<std::string> split_ids(const std::string& field) {
    std::set<std::string> out;
    if (field == "-") return out;
    std::stringstream ss(field);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

} // namespace

const SettingGroup& SettingGroupSet::group(int id) const {
    for (const auto& g : groups)
        if (g.group_id == id) return g;
    throw SemanticError(strformat("setting group %d not found", id));
}

SettingGroupSet synthesize_setting_groups(const grid::MinFaultTable& table,
                                          const SynthesisOptions& options) {
    double max = 0.0, min = 0.0;
    bool any = false;
    for (const auto& [cont, amps] : table.entries) {
        if (!amps) continue;
        if (!any || *amps > max) max = *amps;
        if (!any || *amps < min) min = *amps;
        any = true;
    }
    if (!any) throw SemanticError("no reachable faults");

    double width = 0.0;
    if (options.width_override_amps) {
        width = *options.width_override_amps;
        if (width <= 0) throw SemanticError("group width must be > 0");
    } else {
        double r = options.ratio;
        if (r <= 0.0 || r >= 1.0) throw SemanticError("clustering ratio must be in (0,1)");
        // Largest width that keeps width <= ratio * (lowest bin's lower
        // bound). With b bins the candidate width is r*max/(1 + r*b); the
        // first bin count whose candidate actually spans the populated range
        // satisfies the ratio bound for every bin.
        for (int b = 1;; ++b) {
            double w = r * max / (1.0 + r * b);
            if (w <= 0.0 || !std::isfinite(w))
                throw SemanticError("cannot satisfy clustering ratio for this table");
            if (bin_of(min, max, w) <= b) {
                width = w;
                break;
            }
            if (b > 1000000) throw SemanticError("cannot satisfy clustering ratio for this table");
        }
    }

    int bins = bin_of(min, max, width);

    SettingGroupSet set;
    set.relay = table.relay;
    for (int k = 1; k <= bins; ++k) {
        SettingGroup g;
        g.group_id = k;
        g.lower_bound_amps = max - k * width;
        g.upper_bound_amps = max - (k - 1) * width;
        g.pickup_amps = 0.5 * g.lower_bound_amps;
        set.groups.push_back(g);
    }
    for (const auto& [cont, amps] : table.entries) {
        if (!amps) continue;
        set.groups[bin_of(*amps, max, width) - 1].activation_conditions.push_back(cont);
    }
    set.default_group = bins;

    if (options.line_load_amps) {
        for (const auto& g : set.groups) {
            if (g.pickup_amps <= 2.0 * *options.line_load_amps)
                set.diagnostics.push_back(strformat(
                    "group %d pickup %.1f A does not exceed twice the line load (%.1f A)",
                    g.group_id, g.pickup_amps, *options.line_load_amps));
        }
    }
    return set;
}

int select_active_group(const SettingGroupSet& set, const grid::Contingency& status) {
    if (set.groups.empty()) throw SemanticError("empty setting group set");
    for (const auto& g : set.groups)
        for (const auto& cond : g.activation_conditions)
            if (cond == status) return g.group_id;
    return set.default_group;
}

std::string serialize_setting_groups(const SettingGroupSet& set) {
    std::string out;
    out += "[meta]\n";
    out += "relay " + set.relay + "\n";
    out += strformat("default_group %d\n", set.default_group);
    out += "\n[groups]\n";
    out += "# id  lower_a  upper_a  pickup_a\n";
    for (const auto& g : set.groups)
        out += strformat("%d  %s  %s  %s\n", g.group_id, format_amps(g.lower_bound_amps).c_str(),
                         format_amps(g.upper_bound_amps).c_str(),
                         format_amps(g.pickup_amps).c_str());
    out += "\n[activations]\n";
    out += "# group  line_outages  source_outages\n";
    for (const auto& g : set.groups)
        for (const auto& cond : g.activation_conditions)
            out += strformat("%d  %s  %s\n", g.group_id, join_ids(cond.line_outages).c_str(),
                             join_ids(cond.source_outages).c_str());
    return out;
}

SettingGroupSet parse_setting_groups(const std::string& text, const std::string& origin) {
    SettingGroupSet set;
    for (const auto& sec : read_document(text, origin)) {
        if (sec.name == "meta") {
            for (const auto& rec : sec.records) {
                if (rec.fields.size() < 2)
                    throw ParseError(origin, rec.line_no, "meta entry needs a key and a value");
                if (rec.fields[0] == "relay") set.relay = rec.fields[1];
                else if (rec.fields[0] == "default_group")
                    set.default_group = static_cast<int>(parse_double(rec, 1, origin));
            }
        } else if (sec.name == "groups") {
            for (const auto& rec : sec.records) {
                if (rec.fields.size() < 4)
                    throw ParseError(origin, rec.line_no, "group entry needs 4 fields");
                SettingGroup g;
                g.group_id = static_cast<int>(parse_double(rec, 0, origin));
                g.lower_bound_amps = parse_double(rec, 1, origin);
                g.upper_bound_amps = parse_double(rec, 2, origin);
                g.pickup_amps = parse_double(rec, 3, origin);
                set.groups.push_back(g);
            }
        } else if (sec.name == "activations") {
            for (const auto& rec : sec.records) {
                if (rec.fields.size() < 3)
                    throw ParseError(origin, rec.line_no, "activation entry needs 3 fields");
                int id = static_cast<int>(parse_double(rec, 0, origin));
                grid::Contingency c;
                c.line_outages = split_ids(rec.fields[1]);
                c.source_outages = split_ids(rec.fields[2]);
                bool found = false;
                for (auto& g : set.groups)
                    if (g.group_id == id) {
                        g.activation_conditions.push_back(std::move(c));
                        found = true;
                        break;
                    }
                if (!found)
                    throw ParseError(origin, rec.line_no, strformat("unknown group id %d", id));
            }
        } else {
            throw ParseError(origin, sec.line_no, "unknown section [" + sec.name + "]");
        }
    }
    if (set.groups.empty()) throw ParseError(origin, 1, "document defines no groups");
    return set;
}

} // namespace dcprot::settings

namespace dcprot::grid {

MinFaultTable parse_min_fault_table(const std::string& text, const std::string& origin) {
    MinFaultTable table;
    std::vector<std::string> columns;
    for (const auto& sec : read_document(text, origin)) {
        if (sec.name == "meta") {
            for (const auto& rec : sec.records) {
                if (rec.fields.empty()) continue;
                if (rec.fields[0] == "relay" && rec.fields.size() >= 2) table.relay = rec.fields[1];
                else if (rec.fields[0] == "columns")
                    columns.assign(rec.fields.begin() + 1, rec.fields.end());
            }
        } else if (sec.name == "rows") {
            if (columns.empty())
                throw ParseError(origin, sec.line_no, "[meta] must define columns before [rows]");
            for (const auto& rec : sec.records) {
                if (rec.fields.size() != columns.size() + 1)
                    throw ParseError(origin, rec.line_no,
                                     dcprot::strformat("row needs %zu cells, got %zu",
                                                       columns.size(), rec.fields.size() - 1));
                for (size_t c = 0; c < columns.size(); ++c) {
                    Contingency cont;
                    cont.line_outages.insert(rec.fields[0]);
                    if (columns[c] != "none") cont.source_outages.insert(columns[c]);
                    const std::string& cell = rec.fields[c + 1];
                    if (cell == "N/D")
                        table.entries.emplace_back(cont, std::nullopt);
                    else
                        table.entries.emplace_back(cont,
                                                   parse_double_field(cell, rec.line_no, origin));
                }
            }
        } else {
            throw ParseError(origin, sec.line_no, "unknown section [" + sec.name + "]");
        }
    }
    if (table.entries.empty()) throw ParseError(origin, 1, "table has no rows");
    return table;
}

MinFaultTable load_min_fault_table_file(const std::string& path) {
    return parse_min_fault_table(read_file(path), path);
}

std::string serialize_min_fault_table(const MinFaultTable& table) {
    // Rebuild the row/column layout when the entries follow the fixture shape
    // (single line outage rows, single/no source outage columns); otherwise
    // fall back to one entry per record.
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    bool grid_shape = true;
    for (const auto& [cont, amps] : table.entries) {
        (void)amps;
        if (cont.line_outages.size() != 1 || cont.source_outages.size() > 1) {
            grid_shape = false;
            break;
        }
        std::string row = *cont.line_outages.begin();
        std::string col = cont.source_outages.empty() ? "none" : *cont.source_outages.begin();
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
        if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
    }

    std::string out;
    out += "[meta]\n";
    out += "relay " + table.relay + "\n";
    if (grid_shape) {
        out += "columns";
        for (const auto& c : cols) out += " " + c;
        out += "\n\n[rows]\n";
        for (const auto& row : rows) {
            out += row;
            for (const auto& col : cols) {
                Contingency c;
                c.line_outages.insert(row);
                if (col != "none") c.source_outages.insert(col);
                auto found = std::find_if(table.entries.begin(), table.entries.end(),
                                          [&](const auto& e) { return e.first == c; });
                if (found == table.entries.end() || !found->second)
                    out += "  N/D";
                else
                    out += "  " + dcprot::strformat("%.10g", *found->second);
            }
            out += "\n";
        }
    } else {
        out += "columns none\n\n[rows]\n";
        for (const auto& [cont, amps] : table.entries) {
            out += cont.label();
            out += amps ? "  " + dcprot::strformat("%.10g", *amps) : std::string("  N/D");
            out += "\n";
        }
    }
    return out;
}

} // namespace dcprot::grid
