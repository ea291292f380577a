#include "dcprot/grid/topology_parser.hpp"

#include "dcprot/common.hpp"
#include "dcprot/doc.hpp"

namespace dcprot::grid {

namespace {

SourceKind parse_source_kind(const std::string& s, int line_no, const std::string& origin) {
    if (s == "slack") return SourceKind::slack;
    if (s == "pv") return SourceKind::pv;
    if (s == "synchronous") return SourceKind::synchronous;
    throw ParseError(origin, line_no, "unknown source kind '" + s + "'");
}

LineEnd parse_line_end(const std::string& s, int line_no, const std::string& origin) {
    if (s == "from") return LineEnd::from;
    if (s == "to") return LineEnd::to;
    throw ParseError(origin, line_no, "relay end must be 'from' or 'to', got '" + s + "'");
}

bool parse_status(const std::string& s, int line_no, const std::string& origin) {
    if (s == "in") return true;
    if (s == "out") return false;
    throw ParseError(origin, line_no, "status must be 'in' or 'out', got '" + s + "'");
}

void require_fields(const DocRecord& rec, size_t min_count, const std::string& origin,
                    const char* what) {
    if (rec.fields.size() < min_count)
        throw ParseError(origin, rec.line_no,
                         strformat("%s entry needs at least %zu fields, got %zu", what, min_count,
                                   rec.fields.size()));
}

} // namespace

GridTopology load_topology(const std::string& text, const std::string& origin) {
    auto sections = read_document(text, origin);
    if (sections.empty()) throw ParseError(origin, 1, "empty topology document");

    GridTopology topo;
    for (const auto& sec : sections) {
        if (sec.name == "buses") {
            for (const auto& rec : sec.records) {
                require_fields(rec, 2, origin, "bus");
                topo.buses.push_back({rec.fields[0], parse_double(rec, 1, origin)});
            }
        } else if (sec.name == "lines") {
            for (const auto& rec : sec.records) {
                require_fields(rec, 6, origin, "line");
                Line l;
                l.id = rec.fields[0];
                l.from_bus = rec.fields[1];
                l.to_bus = rec.fields[2];
                l.length_km = parse_double(rec, 3, origin);
                l.r_per_km = parse_double(rec, 4, origin);
                l.l_per_km = parse_double(rec, 5, origin);
                if (rec.fields.size() > 6) l.in_service = parse_status(rec.fields[6], rec.line_no, origin);
                topo.lines.push_back(std::move(l));
            }
        } else if (sec.name == "sources") {
            for (const auto& rec : sec.records) {
                require_fields(rec, 4, origin, "source");
                Source s;
                s.id = rec.fields[0];
                s.bus = rec.fields[1];
                s.rating_va = parse_double(rec, 2, origin);
                s.kind = parse_source_kind(rec.fields[3], rec.line_no, origin);
                if (rec.fields.size() > 4 && rec.fields[4] != "auto")
                    s.internal_resistance_ohm = parse_double(rec, 4, origin);
                if (rec.fields.size() > 5) s.resistance_factor = parse_double(rec, 5, origin);
                topo.sources.push_back(std::move(s));
            }
        } else if (sec.name == "loads") {
            for (const auto& rec : sec.records) {
                require_fields(rec, 3, origin, "load");
                topo.loads.push_back({rec.fields[0], rec.fields[1], parse_double(rec, 2, origin)});
            }
        } else if (sec.name == "relays") {
            for (const auto& rec : sec.records) {
                require_fields(rec, 3, origin, "relay");
                topo.relays.push_back(
                    {rec.fields[0], rec.fields[1], parse_line_end(rec.fields[2], rec.line_no, origin)});
            }
        } else {
            throw ParseError(origin, sec.line_no, "unknown section [" + sec.name + "]");
        }
    }

    topo.finalize();
    return topo;
}

GridTopology load_topology_file(const std::string& path) {
    return load_topology(read_file(path), path);
}

} // namespace dcprot::grid
