#include "dcprot/sim/scenario.hpp"

#include "dcprot/common.hpp"
#include "dcprot/doc.hpp"

#include <sstream>

namespace dcprot::sim {

void Scenario::validate(const grid::GridTopology& topo) const {
    if (name.empty()) throw SemanticError("scenario has no name");
    if (!topo.has_line(fault.line))
        throw SemanticError("scenario '" + name + "': unknown fault line '" + fault.line + "'");
    if (fault.position < 0 || fault.position > 1)
        throw SemanticError("scenario '" + name + "': fault position outside [0,1]");
    if (fault.fault_resistance_ohm < 0)
        throw SemanticError("scenario '" + name + "': negative fault resistance");
    if (!(fault_time_s < duration_s))
        throw SemanticError("scenario '" + name + "': fault_time must be before duration");
    if (fault_time_s < 0) throw SemanticError("scenario '" + name + "': negative fault_time");
    if (sample_step_s <= 0) throw SemanticError("scenario '" + name + "': sample_step must be > 0");
    for (const auto& l : contingency.line_outages)
        if (!topo.has_line(l))
            throw SemanticError("scenario '" + name + "': unknown outaged line '" + l + "'");
    for (const auto& s : contingency.source_outages)
        if (!topo.has_source(s))
            throw SemanticError("scenario '" + name + "': unknown outaged source '" + s + "'");
    for (const auto& r : adjacent_failure)
        if (!topo.has_relay(r))
            throw SemanticError("scenario '" + name + "': unknown failed relay '" + r + "'");
    if (contingency.line_outages.count(fault.line))
        throw SemanticError("scenario '" + name + "': fault line is outaged by the contingency");
}

namespace {

std::set<std::string> split_ids(const std::string& field) {
    std::set<std::string> out;
    if (field == "-") return out;
    std::stringstream ss(field);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

std::string join_ids(const std::set<std::string>& ids) {
    if (ids.empty()) return "-";
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ',';
        out += id;
    }
    return out;
}

} // namespace

std::vector<Scenario> parse_scenarios(const std::string& text, const std::string& origin) {
    std::vector<Scenario> out;
    for (const auto& sec : read_document(text, origin)) {
        if (sec.name != "scenario")
            throw ParseError(origin, sec.line_no, "unknown section [" + sec.name + "]");
        Scenario s;
        for (const auto& rec : sec.records) {
            if (rec.fields.size() < 2)
                throw ParseError(origin, rec.line_no, "scenario entry needs a key and a value");
            const std::string& key = rec.fields[0];
            const std::string& value = rec.fields[1];
            if (key == "name") s.name = value;
            else if (key == "fault_line") s.fault.line = value;
            else if (key == "fault_position") s.fault.position = parse_double(rec, 1, origin);
            else if (key == "fault_kind") {
                if (value == "pole_pole") s.fault.kind = grid::FaultKind::pole_pole;
                else if (value == "pole_ground") s.fault.kind = grid::FaultKind::pole_ground;
                else throw ParseError(origin, rec.line_no, "unknown fault kind '" + value + "'");
            } else if (key == "fault_resistance")
                s.fault.fault_resistance_ohm = parse_double(rec, 1, origin);
            else if (key == "fault_time") s.fault_time_s = parse_double(rec, 1, origin);
            else if (key == "duration") s.duration_s = parse_double(rec, 1, origin);
            else if (key == "sample_step") s.sample_step_s = parse_double(rec, 1, origin);
            else if (key == "line_outages") s.contingency.line_outages = split_ids(value);
            else if (key == "source_outages") s.contingency.source_outages = split_ids(value);
            else if (key == "failed_relays") s.adjacent_failure = split_ids(value);
            else throw ParseError(origin, rec.line_no, "unknown scenario key '" + key + "'");
        }
        if (s.name.empty()) throw ParseError(origin, sec.line_no, "scenario has no name");
        if (s.fault.line.empty()) throw ParseError(origin, sec.line_no, "scenario has no fault_line");
        out.push_back(std::move(s));
    }
    if (out.empty()) throw ParseError(origin, 1, "document defines no scenarios");
    return out;
}

std::vector<Scenario> load_scenarios_file(const std::string& path) {
    return parse_scenarios(read_file(path), path);
}

std::string serialize_scenario(const Scenario& s) {
    std::string out;
    out += "[scenario]\n";
    out += "name " + s.name + "\n";
    out += "fault_line " + s.fault.line + "\n";
    out += strformat("fault_position %.10g\n", s.fault.position);
    out += std::string("fault_kind ") +
           (s.fault.kind == grid::FaultKind::pole_pole ? "pole_pole" : "pole_ground") + "\n";
    out += strformat("fault_resistance %.10g\n", s.fault.fault_resistance_ohm);
    out += strformat("fault_time %.10g\n", s.fault_time_s);
    out += strformat("duration %.10g\n", s.duration_s);
    out += strformat("sample_step %.10g\n", s.sample_step_s);
    out += "line_outages " + join_ids(s.contingency.line_outages) + "\n";
    out += "source_outages " + join_ids(s.contingency.source_outages) + "\n";
    out += "failed_relays " + join_ids(s.adjacent_failure) + "\n";
    return out;
}

} // namespace dcprot::sim
