#include <doctest.h>

#include "dcprot/common.hpp"
#include "dcprot/grid/fault_solver.hpp"
#include "dcprot/grid/topology_parser.hpp"

#include <cmath>
#include <random>

using namespace dcprot;
using namespace dcprot::grid;

namespace {

/// Single 1500 V source behind 0.5 ohm feeding a 5 km radial line.
const char* kRadialDoc = R"(
[buses]
B1 1500
B2 1500
[lines]
L1 B1 B2 5 0.018 0.0032
[sources]
S1 B1 1.0e6 slack 0.5
[loads]
[relays]
R1 L1 from
R2 L1 to
)";

GridTopology radial() { return load_topology(kRadialDoc, "radial"); }

std::string fixture_path(const char* name) {
    return std::string(DCPROT_FIXTURE_DIR) + "/" + name;
}

} // namespace

TEST_CASE("topology parser accepts the 14-bus fixture") {
    GridTopology topo = load_topology_file(fixture_path("ieee14_dc.grid"));
    CHECK(topo.buses.size() == 14);
    CHECK(topo.lines.size() == 21);
    CHECK(topo.sources.size() == 5);
    CHECK(topo.loads.size() == 10);
    CHECK(topo.relays.size() == 42);
    CHECK(topo.bus("B7").nominal_voltage == 380.0);
    CHECK(topo.relay("R12").end == LineEnd::from);
    CHECK(topo.relay_bus(topo.relay("R12")) == "B1");
    CHECK(topo.relay_far_bus(topo.relay("R21")) == "B1");
}

TEST_CASE("topology parser rejects bad documents") {
    CHECK_THROWS_AS(load_topology("", "empty"), ParseError);
    CHECK_THROWS_AS(load_topology("B1 1500\n", "no-section"), ParseError);

    // dangling bus reference
    const char* dangling = R"(
[buses]
B1 1500
[lines]
L1 B1 B99 5 0.018 0.0032
)";
    CHECK_THROWS_AS(load_topology(dangling, "dangling"), SemanticError);
    CHECK_THROWS_WITH_AS(load_topology(dangling, "dangling"), doctest::Contains("B99"),
                         SemanticError);

    const char* negative_length = R"(
[buses]
B1 1500
B2 1500
[lines]
L1 B1 B2 -5 0.018 0.0032
)";
    CHECK_THROWS_AS(load_topology(negative_length, "neg"), SemanticError);

    const char* bad_number = R"(
[buses]
B1 fifteen-hundred
)";
    CHECK_THROWS_AS(load_topology(bad_number, "nan"), ParseError);
}

TEST_CASE("thevenin current of the radial circuit matches the hand reduction") {
    GridTopology topo = radial();
    NetworkSolver solver(topo);

    // 1500 V behind 0.5 + 0.09 ohm, bolted fault at the line end.
    FaultSpec fault{"L1", 1.0, FaultKind::pole_pole, 0.0};
    auto amps = thevenin_fault_current(solver, fault);
    REQUIRE(amps.has_value());
    CHECK(*amps == doctest::Approx(1500.0 / 0.59).epsilon(1e-6));

    SUBCASE("open-circuit limit") {
        fault.fault_resistance_ohm = 1e12;
        auto tiny = thevenin_fault_current(solver, fault);
        REQUIRE(tiny.has_value());
        CHECK(*tiny < 1e-8);
    }

    SUBCASE("isolated fault reports no current") {
        Contingency all_sources_out;
        all_sources_out.source_outages = {"S1"};
        CHECK_FALSE(thevenin_fault_current(solver, fault, all_sources_out).has_value());
        CHECK_FALSE(solver.fault_point_reachable(fault, all_sources_out));
    }
}

TEST_CASE("fault waveform has the first-order RL shape") {
    GridTopology topo = radial();
    NetworkSolver solver(topo);
    FaultSpec fault{"L1", 1.0, FaultKind::pole_pole, 0.0};

    auto wf = fault_waveform(solver, fault);
    REQUIRE(wf.has_value());
    // L_th = 16 mH, R_th = 0.59 ohm -> tau ~ 27.1 ms.
    CHECK(wf->tau_s == doctest::Approx(0.016 / 0.59).epsilon(1e-4));
    CHECK(wf->at(0.0) == 0.0);
    CHECK(wf->at(wf->tau_s) == doctest::Approx((1.0 - std::exp(-1.0)) * wf->i_ss_amps).epsilon(1e-9));

    // Monotone, bounded by i_ss.
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        double v = wf->at(i * 1e-3);
        CHECK(v >= prev);
        CHECK(v <= wf->i_ss_amps);
        prev = v;
    }

    // Reaching 95% of i_ss within 2 ms requires tau <= 2ms/ln(20) ~ 0.667 ms.
    double t95 = wf->tau_s * std::log(20.0);
    CHECK(t95 > 2e-3); // this circuit is far slower than that
    Waveform fast{1.0, 0.667e-3};
    CHECK(fast.tau_s * std::log(20.0) < 2e-3);
    Waveform slow{1.0, 0.668e-3};
    CHECK(slow.tau_s * std::log(20.0) > 2e-3);
}

TEST_CASE("linearity: doubling source voltages doubles fault currents") {
    GridTopology topo = load_topology_file(fixture_path("ieee14_dc.grid"));
    // Pin explicit internal resistances so the derived values do not change
    // with the voltage rescale.
    for (auto& s : topo.sources)
        s.internal_resistance_ohm = s.effective_resistance(topo.bus(s.bus).nominal_voltage);
    GridTopology doubled = topo;
    for (auto& b : doubled.buses) b.nominal_voltage *= 2.0;
    topo.finalize();
    doubled.finalize();

    NetworkSolver base(topo), twice(doubled);
    for (const char* line : {"L12", "L23", "L47", "L910"}) {
        for (double pos : {0.0, 0.3, 1.0}) {
            FaultSpec f{line, pos, FaultKind::pole_pole, 0.05};
            auto a = thevenin_fault_current(base, f);
            auto b = thevenin_fault_current(twice, f);
            REQUIRE(a.has_value());
            REQUIRE(b.has_value());
            CHECK(*b == doctest::Approx(2.0 * *a).epsilon(1e-12));
        }
    }
}

TEST_CASE("monotonicity in fault resistance") {
    GridTopology topo = load_topology_file(fixture_path("ieee14_dc.grid"));
    NetworkSolver solver(topo);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rf(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        double r1 = rf(rng), r2 = rf(rng);
        if (r1 > r2) std::swap(r1, r2);
        FaultSpec f1{"L24", 0.5, FaultKind::pole_pole, r1};
        FaultSpec f2{"L24", 0.5, FaultKind::pole_pole, r2};
        auto i1 = thevenin_fault_current(solver, f1);
        auto i2 = thevenin_fault_current(solver, f2);
        REQUIRE(i1.has_value());
        REQUIRE(i2.has_value());
        CHECK(*i1 >= *i2);
    }
}

TEST_CASE("series consistency: splitting a line does not change fault currents") {
    const char* whole = R"(
[buses]
B1 1500
B2 1500
B3 1500
[lines]
LA B1 B2 5 0.018 0.0032
LB B2 B3 5 0.018 0.0032
LC B1 B3 4 0.018 0.0032
[sources]
S1 B1 1.0e6 slack 2.0
S2 B3 500e3 pv 4.0
)";
    // LB split into two half-length segments joined at BM.
    const char* split = R"(
[buses]
B1 1500
B2 1500
B3 1500
BM 1500
[lines]
LA B1 B2 5 0.018 0.0032
LB1 B2 BM 2.5 0.018 0.0032
LB2 BM B3 2.5 0.018 0.0032
LC B1 B3 4 0.018 0.0032
[sources]
S1 B1 1.0e6 slack 2.0
S2 B3 500e3 pv 4.0
)";
    NetworkSolver a(load_topology(whole, "whole"));
    NetworkSolver b(load_topology(split, "split"));

    for (double pos : {0.1, 0.2, 0.4}) {
        // position p on LB equals position 2p on LB1
        FaultSpec fw{"LB", pos, FaultKind::pole_pole, 0.1};
        FaultSpec fs{"LB1", 2.0 * pos, FaultKind::pole_pole, 0.1};
        auto iw = thevenin_fault_current(a, fw);
        auto is = thevenin_fault_current(b, fs);
        REQUIRE(iw.has_value());
        REQUIRE(is.has_value());
        CHECK(*is == doctest::Approx(*iw).epsilon(1e-9));
    }
    // Faults on an untouched line are also unchanged.
    FaultSpec fa{"LA", 0.7, FaultKind::pole_pole, 0.0};
    CHECK(*thevenin_fault_current(b, fa) ==
          doctest::Approx(*thevenin_fault_current(a, fa)).epsilon(1e-9));
}

TEST_CASE("isolation is equivalent to graph reachability") {
    GridTopology topo = load_topology_file(fixture_path("ieee14_dc.grid"));
    NetworkSolver solver(topo);

    // Cutting L910 and L1011 islands B10 without any source.
    Contingency islanding;
    islanding.line_outages = {"L910", "L1011"};
    FaultSpec f{"L910", 0.5, FaultKind::pole_pole, 0.0};
    CHECK_FALSE(thevenin_fault_current(solver, f, islanding).has_value());

    Contingency partial;
    partial.line_outages = {"L1011"};
    auto amps = thevenin_fault_current(solver, f, partial);
    CHECK(solver.fault_point_reachable(f, partial));
    REQUIRE(amps.has_value());
    CHECK(*amps > 0.0);
}

TEST_CASE("pole-ground faults use the halved driving voltage") {
    GridTopology topo = radial();
    NetworkSolver solver(topo);
    FaultSpec pp{"L1", 1.0, FaultKind::pole_pole, 0.0};
    FaultSpec pg{"L1", 1.0, FaultKind::pole_ground, 0.0};
    auto ipp = thevenin_fault_current(solver, pp);
    auto ipg = thevenin_fault_current(solver, pg);
    REQUIRE(ipp.has_value());
    REQUIRE(ipg.has_value());
    CHECK(*ipg == doctest::Approx(*ipp / 2.0).epsilon(1e-12));

    SolverConfig cfg;
    cfg.grounding_resistance_ohm = 0.5;
    NetworkSolver grounded(topo, cfg);
    auto ig = thevenin_fault_current(grounded, pg);
    REQUIRE(ig.has_value());
    CHECK(*ig == doctest::Approx(750.0 / (0.59 + 0.5)).epsilon(1e-6));
}

TEST_CASE("relay shares: symmetric parallel paths split the fault current") {
    const char* doc = R"(
[buses]
B1 1500
B2 1500
B3 1500
[lines]
LA B1 B2 5 0.018 0.0032
LB B1 B2 5 0.018 0.0032
LC B2 B3 5 0.018 0.0032
[sources]
S1 B1 1.0e6 slack 0.5
[relays]
RA LA from
RB LB from
RC LC from
RREV LC to
)";
    NetworkSolver solver(load_topology(doc, "parallel"));
    FaultSpec f{"LC", 1.0, FaultKind::pole_pole, 0.0};
    auto sol = solver.solve_fault(f, {});
    REQUIRE(sol.has_value());
    CHECK(sol->relay_amps.at("RA") == doctest::Approx(sol->relay_amps.at("RB")).epsilon(1e-12));
    CHECK(sol->relay_amps.at("RA") == doctest::Approx(sol->i_fault_amps / 2.0).epsilon(1e-9));
    CHECK(sol->relay_amps.at("RC") == doctest::Approx(sol->i_fault_amps).epsilon(1e-9));
    // No infeed behind the far-end relay: its directional current is zero.
    CHECK(sol->relay_amps.at("RREV") == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("load flow through a radial feeder") {
    const char* doc = R"(
[buses]
B1 1500
B2 1500
[lines]
L1 B1 B2 5 0.018 0.0032
[sources]
S1 B1 1.0e6 slack 0.5
[loads]
LD B2 150e3
[relays]
R1 L1 from
R2 L1 to
)";
    NetworkSolver solver(load_topology(doc, "loadflow"));
    RelayCurrents flows = solver.solve_load_flow({});
    // Pinned 1500 V across 0.09 ohm line + 15 ohm load.
    CHECK(flows.at("R1") == doctest::Approx(1500.0 / 15.09).epsilon(1e-9));
    CHECK(flows.at("R2") == doctest::Approx(-1500.0 / 15.09).epsilon(1e-9));

    // Outaged source kills the island.
    Contingency out;
    out.source_outages = {"S1"};
    RelayCurrents dead = solver.solve_load_flow(out);
    CHECK(dead.at("R1") == 0.0);
}

TEST_CASE("min fault current table shapes") {
    GridTopology topo = load_topology_file(fixture_path("ieee14_dc.grid"));
    NetworkSolver solver(topo);
    std::vector<ZonePoint> zone{{"L12", 1.0}};

    SUBCASE("empty contingency list gives an empty table") {
        auto table = min_fault_current_table(solver, "R12", {}, zone);
        CHECK(table.entries.empty());
    }

    SUBCASE("Table-III-shaped contingency grid") {
        std::vector<Contingency> grid;
        std::vector<std::string> rows{"L12",  "L15",  "L25",  "L24",  "L23",  "L34",  "L45",
                                      "L56",  "L47",  "L49",  "L78",  "L79",  "L612", "L613",
                                      "L611", "L1213", "L1314", "L914", "L910", "L1011"};
        std::vector<std::string> cols{"", "S1", "S2", "S3", "S6", "S8"};
        for (const auto& row : rows)
            for (const auto& col : cols) {
                Contingency c;
                c.line_outages = {row};
                if (!col.empty()) c.source_outages = {col};
                grid.push_back(c);
            }
        auto table = min_fault_current_table(solver, "R12", grid, zone);
        CHECK(table.entries.size() == 120);
        // Row 0: the relay's own line is outaged, every cell N/D.
        for (size_t i = 0; i < 6; ++i) CHECK_FALSE(table.entries[i].second.has_value());
        // Other rows carry finite currents.
        for (size_t i = 6; i < table.entries.size(); ++i) {
            REQUIRE(table.entries[i].second.has_value());
            CHECK(*table.entries[i].second > 0.0);
        }
    }

    SUBCASE("islanding contingency becomes an N/D row") {
        std::vector<ZonePoint> z910{{"L910", 1.0}};
        Contingency islanding;
        islanding.line_outages = {"L910", "L1011"};
        auto table = min_fault_current_table(solver, "R910", {islanding}, z910);
        REQUIRE(table.entries.size() == 1);
        CHECK_FALSE(table.entries[0].second.has_value());
    }

    SUBCASE("empty zone is rejected") {
        CHECK_THROWS_AS(min_fault_current_table(solver, "R12", {}, {}), SemanticError);
    }
}
