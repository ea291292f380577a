#include "dcprot/grid/fault_solver.hpp"

#include "dcprot/common.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <queue>

namespace dcprot::grid {

double Waveform::at(double t) const {
    if (t <= 0.0) return 0.0;
    if (tau_s <= 0.0) return i_ss_amps;
    return i_ss_amps * (1.0 - std::exp(-t / tau_s));
}

std::optional<double> MinFaultTable::lookup(const Contingency& c) const {
    for (const auto& [cont, amps] : entries)
        if (cont == c) return amps;
    return std::nullopt;
}

bool MinFaultTable::has(const Contingency& c) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const auto& e) { return e.first == c; });
}

namespace {

constexpr double kMinFaultPosition = 1e-6;

/// Internal node name of the fault point; never collides with bus ids from
/// parsed documents (section records cannot contain control characters).
const std::string kFaultNode = "\x01fault";

struct Branch {
    enum class Kind { line, segment_from, segment_to, source, load };
    Kind kind;
    std::string element; // line/source/load id
    std::string node_a;
    std::string node_b;  // empty = ground
    double r_pu = 0.0;
    double l_pu = 0.0;   // L/Z_base, in seconds
    double emf_pu = 0.0; // source driving voltage
};

struct Network {
    std::vector<std::string> nodes; // deterministic order
    std::map<std::string, int> index;
    std::vector<Branch> branches;   // both endpoints inside `nodes` (or ground)
    std::vector<std::string> source_buses;
};

struct Assembler {
    const GridTopology& topo;
    const SolverConfig& cfg;
    const Contingency& cont;
    const LineEndState& ends;
    const FaultSpec* fault; // nullptr for load flow
    double clamped_pos = 0.0;

    bool line_active(const Line& l) const {
        return l.in_service && cont.line_outages.count(l.id) == 0;
    }
    bool source_active(const Source& s) const {
        return s.in_service && cont.source_outages.count(s.id) == 0;
    }

    double z_base(const std::string& bus_id) const {
        double v = topo.bus(bus_id).nominal_voltage;
        return v * v / cfg.s_base_va;
    }

    /// Conducting branches between nodes (line segments only; sources and
    /// loads are shunts and do not join buses).
    std::vector<Branch> conducting_line_branches() const {
        std::vector<Branch> out;
        for (const auto& l : topo.lines) {
            if (!line_active(l)) continue;
            double zb = z_base(l.from_bus);
            bool from_open = ends.is_open(l.id, LineEnd::from);
            bool to_open = ends.is_open(l.id, LineEnd::to);
            if (fault && fault->line == l.id) {
                double p = clamped_pos;
                if (!from_open)
                    out.push_back({Branch::Kind::segment_from, l.id, l.from_bus, kFaultNode,
                                   p * l.resistance_ohm() / zb, p * l.inductance_h() / zb});
                if (!to_open)
                    out.push_back({Branch::Kind::segment_to, l.id, l.to_bus, kFaultNode,
                                   (1.0 - p) * l.resistance_ohm() / zb,
                                   (1.0 - p) * l.inductance_h() / zb});
            } else {
                if (from_open || to_open) continue;
                out.push_back({Branch::Kind::line, l.id, l.from_bus, l.to_bus,
                               l.resistance_ohm() / zb, l.inductance_h() / zb});
            }
        }
        return out;
    }

    /// Connected component containing `start`, or all nodes when start is
    /// empty; adjacency over conducting line branches.
    Network build(const std::string& start, double emf_fraction) const {
        auto line_branches = conducting_line_branches();
        std::map<std::string, std::vector<const Branch*>> adj;
        for (const auto& b : line_branches) {
            adj[b.node_a].push_back(&b);
            adj[b.node_b].push_back(&b);
        }

        Network net;
        std::set<std::string> keep;
        if (start.empty()) {
            for (const auto& b : topo.buses) keep.insert(b.id);
            if (fault) keep.insert(kFaultNode);
        } else {
            std::queue<std::string> q;
            q.push(start);
            keep.insert(start);
            while (!q.empty()) {
                std::string n = q.front();
                q.pop();
                auto it = adj.find(n);
                if (it == adj.end()) continue;
                for (const Branch* b : it->second) {
                    const std::string& other = b->node_a == n ? b->node_b : b->node_a;
                    if (keep.insert(other).second) q.push(other);
                }
            }
        }

        for (const auto& b : topo.buses)
            if (keep.count(b.id)) net.nodes.push_back(b.id);
        if (keep.count(kFaultNode)) net.nodes.push_back(kFaultNode);
        for (size_t i = 0; i < net.nodes.size(); ++i) net.index[net.nodes[i]] = static_cast<int>(i);

        for (auto& b : line_branches)
            if (net.index.count(b.node_a) && net.index.count(b.node_b)) net.branches.push_back(b);

        for (const auto& s : topo.sources) {
            if (!source_active(s) || !net.index.count(s.bus)) continue;
            double v = topo.bus(s.bus).nominal_voltage;
            net.branches.push_back({Branch::Kind::source, s.id, s.bus, std::string{},
                                    s.effective_resistance(v) / z_base(s.bus), 0.0, emf_fraction});
            net.source_buses.push_back(s.bus);
        }
        return net;
    }
};

/// Nodal conductance matrix; sources stamped as Norton equivalents.
struct Solved {
    Eigen::VectorXd v_oc; // source-driven node voltages
    Eigen::VectorXd w;    // response to 1 pu injected at the probe node
};

Solved solve_network(const Network& net, int probe) {
    const int n = static_cast<int>(net.nodes.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd j = Eigen::VectorXd::Zero(n);
    for (const auto& b : net.branches) {
        double y = 1.0 / b.r_pu;
        int a = net.index.at(b.node_a);
        if (b.node_b.empty()) {
            g(a, a) += y;
            j(a) += b.emf_pu * y;
        } else {
            int c = net.index.at(b.node_b);
            g(a, a) += y;
            g(c, c) += y;
            g(a, c) -= y;
            g(c, a) -= y;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    Solved out;
    out.v_oc = ldlt.solve(j);
    Eigen::VectorXd probe_rhs = Eigen::VectorXd::Zero(n);
    probe_rhs(probe) = 1.0;
    out.w = ldlt.solve(probe_rhs);
    return out;
}

double node_value(const Network& net, const Eigen::VectorXd& v, const std::string& node) {
    auto it = net.index.find(node);
    return it == net.index.end() ? 0.0 : v(it->second);
}

/// Signed current at one relay, positive from its bus into its line.
/// `v` is any node-voltage vector of the solved component.
double relay_current_pu(const GridTopology& topo, const Network& net, const Eigen::VectorXd& v,
                        const RelayPlacement& r, const FaultSpec* fault) {
    const Line& l = topo.line(r.line);
    const std::string& near = r.end == LineEnd::from ? l.from_bus : l.to_bus;
    Branch::Kind want = Branch::Kind::line;
    if (fault && fault->line == r.line)
        want = r.end == LineEnd::from ? Branch::Kind::segment_from : Branch::Kind::segment_to;
    for (const auto& b : net.branches) {
        if (b.element != r.line || b.kind != want) continue;
        if (want == Branch::Kind::line) {
            double i = (v(net.index.at(b.node_a)) - v(net.index.at(b.node_b))) / b.r_pu;
            return near == b.node_a ? i : -i;
        }
        return (v(net.index.at(b.node_a)) - v(net.index.at(b.node_b))) / b.r_pu;
    }
    return 0.0; // severed or outside the solved component
}

} // namespace

NetworkSolver::NetworkSolver(const GridTopology& topo, SolverConfig cfg)
    : topo_(&topo), cfg_(cfg) {}

bool NetworkSolver::fault_point_reachable(const FaultSpec& fault, const Contingency& cont,
                                          const LineEndState& ends) const {
    if (!topo_->has_line(fault.line)) throw SemanticError("unknown fault line '" + fault.line + "'");
    const Line& l = topo_->line(fault.line);
    if (!l.in_service || cont.line_outages.count(l.id)) return false;
    Assembler as{*topo_, cfg_, cont, ends, &fault,
                 std::clamp(fault.position, kMinFaultPosition, 1.0 - kMinFaultPosition)};
    Network net = as.build(kFaultNode, 1.0);
    return !net.source_buses.empty();
}

std::optional<FaultSolution> NetworkSolver::solve_fault(const FaultSpec& fault,
                                                        const Contingency& cont,
                                                        const LineEndState& ends) const {
    if (!topo_->has_line(fault.line)) throw SemanticError("unknown fault line '" + fault.line + "'");
    if (fault.position < 0.0 || fault.position > 1.0)
        throw SemanticError("fault position must be within [0,1]");
    if (fault.fault_resistance_ohm < 0.0)
        throw SemanticError("fault resistance must be >= 0");
    const Line& fline = topo_->line(fault.line);
    if (!fline.in_service || cont.line_outages.count(fline.id)) return std::nullopt;

    double emf = fault.kind == FaultKind::pole_pole ? 1.0 : 0.5;
    Assembler as{*topo_, cfg_, cont, ends, &fault,
                 std::clamp(fault.position, kMinFaultPosition, 1.0 - kMinFaultPosition)};
    Network net = as.build(kFaultNode, emf);
    if (net.source_buses.empty()) return std::nullopt;

    Solved sol = solve_network(net, net.index.at(kFaultNode));

    double zone_v = topo_->bus(fline.from_bus).nominal_voltage;
    double z_base = zone_v * zone_v / cfg_.s_base_va;
    double i_base = cfg_.s_base_va / zone_v;

    double r_fault_ohm = fault.fault_resistance_ohm;
    if (fault.kind == FaultKind::pole_ground) r_fault_ohm += cfg_.grounding_resistance_ohm;

    double v_th = node_value(net, sol.v_oc, kFaultNode);
    double r_th = node_value(net, sol.w, kFaultNode);
    double i_fault = v_th / (r_th + r_fault_ohm / z_base);

    // Effective inductance by current weighting: with every branch carrying
    // i_b under unit injection, L_th = sum L_b * i_b^2 (exact when all
    // branches share one L/R ratio, first-order otherwise).
    double l_th = 0.0;
    for (const auto& b : net.branches) {
        if (b.l_pu == 0.0) continue;
        double va = sol.w(net.index.at(b.node_a));
        double vb = b.node_b.empty() ? 0.0 : sol.w(net.index.at(b.node_b));
        double i = (va - vb) / b.r_pu;
        l_th += b.l_pu * i * i;
    }

    FaultSolution out;
    out.v_th_volts = v_th * zone_v;
    out.r_th_ohm = r_th * z_base;
    out.l_th_h = l_th * z_base;
    out.tau_s = r_th > 0.0 ? l_th / r_th : 0.0;
    out.i_fault_amps = i_fault * i_base;

    // Faulted node voltages by superposition: v = v_oc - i_fault * w.
    for (const auto& r : topo_->relays) {
        double i_oc = relay_current_pu(*topo_, net, sol.v_oc, r, &fault);
        double i_w = relay_current_pu(*topo_, net, sol.w, r, &fault);
        double i_pu = i_oc - i_fault * i_w;
        double line_zone_v = topo_->bus(topo_->line(r.line).from_bus).nominal_voltage;
        out.relay_amps[r.id] = i_pu * cfg_.s_base_va / line_zone_v;
    }
    return out;
}

RelayCurrents NetworkSolver::solve_load_flow(const Contingency& cont,
                                             const LineEndState& ends) const {
    Assembler as{*topo_, cfg_, cont, ends, nullptr, 0.0};
    Network net = as.build(std::string{}, 1.0);

    // Dirichlet pins at source buses, load conductances as shunts.
    const int n = static_cast<int>(net.nodes.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (const auto& b : net.branches) {
        if (b.kind == Branch::Kind::source) continue;
        double y = 1.0 / b.r_pu;
        int a = net.index.at(b.node_a);
        int c = net.index.at(b.node_b);
        g(a, a) += y;
        g(c, c) += y;
        g(a, c) -= y;
        g(c, a) -= y;
    }
    for (const auto& d : topo_->loads) {
        if (d.power_w <= 0.0 || !net.index.count(d.bus)) continue;
        g(net.index.at(d.bus), net.index.at(d.bus)) += d.power_w / cfg_.s_base_va;
    }

    std::set<int> pinned;
    for (const auto& bus : net.source_buses) pinned.insert(net.index.at(bus));

    // Free nodes connected to no pin through the line graph stay at 0 V
    // (dead island). Mark reachability from pins first.
    std::vector<char> fed(n, 0);
    {
        std::queue<int> q;
        for (int p : pinned) {
            fed[p] = 1;
            q.push(p);
        }
        std::map<int, std::vector<int>> adj;
        for (const auto& b : net.branches) {
            if (b.kind == Branch::Kind::source) continue;
            int a = net.index.at(b.node_a);
            int c = net.index.at(b.node_b);
            adj[a].push_back(c);
            adj[c].push_back(a);
        }
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : adj[x])
                if (!fed[y]) {
                    fed[y] = 1;
                    q.push(y);
                }
        }
    }

    std::vector<int> free_nodes;
    for (int i = 0; i < n; ++i)
        if (!pinned.count(i) && fed[i]) free_nodes.push_back(i);

    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int p : pinned) v(p) = 1.0;
    if (!free_nodes.empty()) {
        const int m = static_cast<int>(free_nodes.size());
        Eigen::MatrixXd gff(m, m);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) gff(i, j) = g(free_nodes[i], free_nodes[j]);
            for (int p : pinned) rhs(i) -= g(free_nodes[i], p) * 1.0;
        }
        Eigen::VectorXd vf = Eigen::LDLT<Eigen::MatrixXd>(gff).solve(rhs);
        for (int i = 0; i < m; ++i) v(free_nodes[i]) = vf(i);
    }

    RelayCurrents out;
    for (const auto& r : topo_->relays) {
        double i_pu = relay_current_pu(*topo_, net, v, r, nullptr);
        double line_zone_v = topo_->bus(topo_->line(r.line).from_bus).nominal_voltage;
        // Zero out currents on branches that are only fed from one side of a
        // dead island; relay_current_pu already returns 0 for severed lines.
        out[r.id] = i_pu * cfg_.s_base_va / line_zone_v;
    }
    return out;
}

std::optional<double> thevenin_fault_current(const NetworkSolver& solver, const FaultSpec& fault,
                                             const Contingency& cont) {
    auto sol = solver.solve_fault(fault, cont);
    if (!sol) return std::nullopt;
    return sol->i_fault_amps;
}

std::optional<Waveform> fault_waveform(const NetworkSolver& solver, const FaultSpec& fault,
                                       const Contingency& cont) {
    auto sol = solver.solve_fault(fault, cont);
    if (!sol) return std::nullopt;
    return Waveform{sol->i_fault_amps, sol->tau_s};
}

MinFaultTable min_fault_current_table(const NetworkSolver& solver, const std::string& relay,
                                      const std::vector<Contingency>& contingencies,
                                      const std::vector<ZonePoint>& zone, FaultKind kind,
                                      double fault_resistance_ohm) {
    if (zone.empty()) throw SemanticError("protection zone must be nonempty");
    solver.topology().relay(relay); // validate the id

    MinFaultTable table;
    table.relay = relay;
    for (const auto& cont : contingencies) {
        std::optional<double> best;
        for (const auto& zp : zone) {
            FaultSpec f{zp.line, zp.position, kind, fault_resistance_ohm};
            if (cont.line_outages.count(zp.line)) continue;
            auto amps = thevenin_fault_current(solver, f, cont);
            if (!amps) continue;
            if (!best || *amps < *best) best = amps;
        }
        table.entries.emplace_back(cont, best);
    }
    return table;
}

} // namespace dcprot::grid
