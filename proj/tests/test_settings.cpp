#include <doctest.h>

#include "dcprot/common.hpp"
#include "dcprot/settings/groups.hpp"
#include "dcprot/settings/idmt.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

using namespace dcprot;
using namespace dcprot::settings;
using grid::Contingency;
using grid::MinFaultTable;

namespace {

namespace mp = boost::multiprecision;
using big = mp::cpp_bin_float_50;

/// Independent high-precision evaluation of the operate-time formula.
double idmt_reference(const IdmtCurve& c, double t_mult, double ratio) {
    big r(ratio);
    big t = big(t_mult) * (big(c.k) / (mp::pow(r, big(c.alpha)) - 1) + big(c.l));
    return t.convert_to<double>();
}

Contingency cont(std::initializer_list<std::string> lines,
                 std::initializer_list<std::string> sources = {}) {
    Contingency c;
    c.line_outages = lines;
    c.source_outages = sources;
    return c;
}

std::string fixture_path(const char* name) {
    return std::string(DCPROT_FIXTURE_DIR) + "/" + name;
}

} // namespace

TEST_CASE("delta_t_min sums the four stage delays") {
    RelayTimeSettings paper; // 4, 15, 5, 5 ms defaults
    CHECK(delta_t_min(paper) == 0.029);

    RelayTimeSettings zeros{0, 0, 0, 0};
    CHECK(delta_t_min(zeros) == 0.0);

    RelayTimeSettings other{0.001, 0.002, 0.003, 0.004};
    CHECK(delta_t_min(other) == doctest::Approx(0.010).epsilon(1e-12));
}

TEST_CASE("idmt_time matches the high-precision reference") {
    IdmtConfig si{kStandardInverse, 1.0, 100.0};
    auto t = idmt_time(si, 200.0); // twice pickup
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(idmt_reference(kStandardInverse, 1.0, 2.0)).epsilon(1e-12));
    CHECK(*t == doctest::Approx(10.02899).epsilon(1e-6));

    IdmtConfig vi{idmt_curve("very_inverse_iec"), 1.0, 100.0};
    auto tv = idmt_time(vi, 200.0);
    REQUIRE(tv.has_value());
    CHECK(*tv == doctest::Approx(1.5).epsilon(1e-12)); // 1.5/(2-1), exact closed form

    SUBCASE("below or at pickup yields no operate time") {
        CHECK_FALSE(idmt_time(si, 100.0).has_value());
        CHECK_FALSE(idmt_time(si, 50.0).has_value());
    }

    SUBCASE("operate time vanishes for enormous multiples when l = 0") {
        auto tiny = idmt_time(si, 1e300 * 100.0);
        REQUIRE(tiny.has_value());
        CHECK(*tiny < 1e-6);
    }

    SUBCASE("all eleven curves agree with the reference at random points") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> tmult(0.025, 1.5);
        std::uniform_real_distribution<double> ratio(1.01, 30.0);
        for (const auto& curve : idmt_curves()) {
            for (int i = 0; i < 8; ++i) {
                double tm = tmult(rng), r = ratio(rng);
                IdmtConfig cfg{curve, tm, 100.0};
                auto got = idmt_time(cfg, 100.0 * r);
                REQUIRE(got.has_value());
                CHECK(*got == doctest::Approx(idmt_reference(curve, tm, r)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("idmt_time is monotone in current and affine in T") {
    IdmtConfig cfg{kStandardInverse, 1.0, 100.0};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amps(101.0, 5000.0);
    for (int i = 0; i < 100; ++i) {
        double i1 = amps(rng), i2 = amps(rng);
        if (i1 > i2) std::swap(i1, i2);
        auto t1 = idmt_time(cfg, i1);
        auto t2 = idmt_time(cfg, i2);
        REQUIRE(t1.has_value());
        REQUIRE(t2.has_value());
        if (i1 < i2) CHECK(*t1 > *t2);
    }

    // With l = 0 the time scales exactly linearly in T.
    IdmtConfig half{kStandardInverse, 0.5, 100.0};
    CHECK(*idmt_time(cfg, 250.0) == doctest::Approx(2.0 * *idmt_time(half, 250.0)).epsilon(1e-12));

    // With l > 0 it is affine: t(T) = T * (core + l).
    IdmtCurve with_l = idmt_curve("very_inverse_ansi");
    IdmtConfig a{with_l, 0.4, 100.0}, b{with_l, 1.2, 100.0};
    CHECK(*idmt_time(b, 300.0) == doctest::Approx(3.0 * *idmt_time(a, 300.0)).epsilon(1e-12));
}

TEST_CASE("synthesis replicates the seven-group clustering of the shipped table") {
    MinFaultTable table = grid::load_min_fault_table_file(fixture_path("r12_min_fault_currents.tbl"));
    CHECK(table.relay == "R12");
    CHECK(table.entries.size() == 120);
    CHECK(table.lookup(cont({"L23"}, {"S3"})) == 881.5);
    CHECK_FALSE(table.lookup(cont({"L12"})).has_value());

    SynthesisOptions opts;
    opts.width_override_amps = 85.0;
    SettingGroupSet set = synthesize_setting_groups(table, opts);
    CHECK(set.groups.size() == 7);
    CHECK(set.default_group == 7);
    CHECK(set.groups[0].upper_bound_amps == 881.5);
    CHECK(set.groups[0].lower_bound_amps == doctest::Approx(796.5));
    CHECK(set.groups[0].pickup_amps == doctest::Approx(398.25));

    // The five conditions listed for the first setting group.
    CHECK(select_active_group(set, cont({"L15"})) == 1);
    CHECK(select_active_group(set, cont({"L25"}, {"S8"})) == 1);
    CHECK(select_active_group(set, cont({"L25"}, {"S1"})) == 1);
    CHECK(select_active_group(set, cont({"L23"}, {"S8"})) == 1);
    CHECK(select_active_group(set, cont({"L23"}, {"S3"})) == 1);

    // Conditions absent from the table fall back to the most sensitive group.
    CHECK(select_active_group(set, cont({}, {"S1"})) == 7);
    CHECK(select_active_group(set, cont({"L15", "L25"}, {"S1", "S2"})) == 7);
}

TEST_CASE("bin assignment agrees with a brute-force oracle") {
    MinFaultTable table;
    table.relay = "RX";
    table.entries = {
        {cont({"A"}), 881.5}, {cont({"B"}), 840.3}, {cont({"C"}), 799.1},
    };
    SynthesisOptions opts;
    opts.width_override_amps = 85.0;
    SettingGroupSet set = synthesize_setting_groups(table, opts);
    // 799.1 > 881.5 - 85 = 796.5, so all three values share the first group.
    CHECK(set.groups.size() == 1);
    CHECK(set.groups[0].activation_conditions.size() == 3);

    SUBCASE("randomized tables") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> amps(50.0, 2000.0);
        std::uniform_int_distribution<int> count(1, 40);
        std::uniform_int_distribution<int> nd(0, 4);
        for (int trial = 0; trial < 200; ++trial) {
            MinFaultTable t;
            t.relay = "RX";
            int n = count(rng);
            for (int i = 0; i < n; ++i) {
                Contingency c = cont({strformat("L%d", i)});
                if (nd(rng) == 0)
                    t.entries.emplace_back(c, std::nullopt);
                else
                    t.entries.emplace_back(c, amps(rng));
            }
            SynthesisOptions o;
            o.ratio = 0.1;
            SettingGroupSet s;
            try {
                s = synthesize_setting_groups(t, o);
            } catch (const SemanticError&) {
                // only legal for the all-N/D table
                bool any = false;
                for (auto& e : t.entries) any |= e.second.has_value();
                CHECK_FALSE(any);
                continue;
            }

            double max = 0.0;
            for (auto& e : t.entries)
                if (e.second && *e.second > max) max = *e.second;
            double width = s.groups[0].upper_bound_amps - s.groups[0].lower_bound_amps;

            // Brute-force interval scan, independent of the implementation's
            // bin arithmetic.
            auto expected_bin = [&](double v) {
                for (size_t k = 0; k < s.groups.size(); ++k) {
                    double lower = max - (k + 1) * width;
                    double upper = max - k * width;
                    if (v >= lower && (v < upper || (k == 0 && v == max))) return int(k) + 1;
                }
                return -1;
            };

            for (auto& [c, v] : t.entries) {
                if (!v) continue;
                int got = select_active_group(s, c);
                CHECK(got == expected_bin(*v));
                // membership in exactly one group interval
                int containing = 0;
                for (auto& g : s.groups)
                    if (*v >= g.lower_bound_amps &&
                        (*v < g.upper_bound_amps ||
                         (g.group_id == 1 && *v == g.upper_bound_amps)))
                        ++containing;
                CHECK(containing == 1);
            }

            // clustering soundness in strict-ratio mode
            for (auto& g : s.groups) {
                double lo = 0.0, hi = 0.0;
                bool any = false;
                for (auto& c : g.activation_conditions) {
                    double v = *t.lookup(c);
                    if (!any || v < lo) lo = v;
                    if (!any || v > hi) hi = v;
                    any = true;
                }
                if (any && hi > 0.0) CHECK((hi - lo) / hi < o.ratio);
            }
        }
    }
}

TEST_CASE("synthesis handles degenerate tables") {
    MinFaultTable single;
    single.relay = "RX";
    single.entries = {{cont({"A"}), 500.0}};
    SettingGroupSet s = synthesize_setting_groups(single, {});
    CHECK(s.groups.size() == 1);
    CHECK(select_active_group(s, cont({"A"})) == 1);

    MinFaultTable empty;
    empty.relay = "RX";
    empty.entries = {{cont({"A"}), std::nullopt}, {cont({"B"}), std::nullopt}};
    CHECK_THROWS_WITH_AS(synthesize_setting_groups(empty, {}), "no reachable faults",
                         SemanticError);
}

TEST_CASE("select_active_group looks up the no-outage condition directly") {
    MinFaultTable t;
    t.relay = "RX";
    t.entries = {{cont({}), 900.0}, {cont({"A"}), 500.0}, {cont({"B"}), 450.0}};
    SettingGroupSet s = synthesize_setting_groups(t, {});
    int no_outage_group = select_active_group(s, cont({}));
    const SettingGroup& g = s.group(no_outage_group);
    CHECK(900.0 >= g.lower_bound_amps);
    CHECK(900.0 <= g.upper_bound_amps);
    CHECK(no_outage_group == 1);
}

TEST_CASE("pickup below twice the line load raises a diagnostic") {
    MinFaultTable t;
    t.relay = "RX";
    t.entries = {{cont({"A"}), 400.0}};
    SynthesisOptions opts;
    opts.line_load_amps = 150.0; // pickup will be ~180 A < 300 A
    SettingGroupSet s = synthesize_setting_groups(t, opts);
    REQUIRE(!s.diagnostics.empty());
    CHECK(s.diagnostics[0].find("twice the line load") != std::string::npos);

    opts.line_load_amps = 10.0;
    CHECK(synthesize_setting_groups(t, opts).diagnostics.empty());
}

TEST_CASE("setting group documents round-trip") {
    MinFaultTable table = grid::load_min_fault_table_file(fixture_path("r12_min_fault_currents.tbl"));
    SynthesisOptions opts;
    opts.width_override_amps = 85.0;
    SettingGroupSet set = synthesize_setting_groups(table, opts);

    std::string doc = serialize_setting_groups(set);
    SettingGroupSet parsed = parse_setting_groups(doc, "roundtrip");
    CHECK(parsed.relay == set.relay);
    CHECK(parsed.default_group == set.default_group);
    REQUIRE(parsed.groups.size() == set.groups.size());
    for (size_t i = 0; i < set.groups.size(); ++i) {
        CHECK(parsed.groups[i].group_id == set.groups[i].group_id);
        CHECK(parsed.groups[i].pickup_amps == doctest::Approx(set.groups[i].pickup_amps));
        CHECK(parsed.groups[i].activation_conditions == set.groups[i].activation_conditions);
    }
}
