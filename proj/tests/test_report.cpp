#include "catch_amalgamated.hpp"
#include "liouville_lab/report.hpp"

#include <cstring>
#include <limits>
#include <sstream>

using namespace liouville_lab;

TEST_CASE("entry pass rule") {
    auto e = make_entry("x", {}, 1.0 + 1e-10, 1.0, 1e-9, Provenance::derived);
    CHECK(e.pass);
    CHECK(std::abs(e.abs_err - 1e-10) <= 1e-16);
    auto f = make_entry("x", {}, 2.0, 1.0, 0.5, Provenance::paper);
    CHECK(!f.pass);
    auto g = make_entry("x", {}, 1e-13, 0.0, 1e-12, Provenance::trivial);
    CHECK(g.pass);
    CHECK(g.rel_err == g.abs_err);
    auto nan = make_entry("x", {}, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0, Provenance::trivial);
    CHECK(!nan.pass);
}

TEST_CASE("bound entries") {
    auto in = make_bound_entry("b", {}, 0.95, 0.9, 1.1, Provenance::paper);
    CHECK(in.pass);
    CHECK(in.expected == 0.95);
    CHECK(in.abs_err == 0.0);
    auto out = make_bound_entry("b", {}, 1.2, 0.9, 1.1, Provenance::paper);
    CHECK(!out.pass);
    CHECK(out.expected == 1.1);
}

TEST_CASE("empty json report") {
    std::ostringstream os;
    emit_json(os, {});
    CHECK(os.str() == "[]");
}

TEST_CASE("csv has header and one row per entry") {
    std::ostringstream os;
    emit_csv(os, {make_entry("a", {{"N", "1"}}, 1.0, 1.0, 0.0, Provenance::trivial)});
    std::string s = os.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 2);
    CHECK(s.find("a,N=1,1,1,0,0,0,true,trivial\n") != std::string::npos);
}

TEST_CASE("csv prints 17 significant digits") {
    std::ostringstream os;
    emit_csv(os, {make_entry("a", {{"k", "x,y"}}, 0.1, 1.0 / 3, 0.0, Provenance::derived)});
    CHECK(os.str().find("0.10000000000000001,0.33333333333333331") != std::string::npos);
    CHECK(os.str().find("\"k=x,y\"") != std::string::npos);
}

TEST_CASE("json round trip is bit exact") {
    std::vector<ReportEntry> v;
    v.push_back(make_entry("moments.I2", {{"N", "1"}, {"seed", "42"}}, 50.26548245743669, 16 * 3.141592653589793,
                           1e-6, Provenance::paper));
    v.push_back(make_entry("far", {}, 1.0 / 3, 0.1 + 0.2, 1e-300, Provenance::derived));
    v.push_back(make_entry("nan", {}, std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0, Provenance::trivial));
    v.push_back(make_bound_entry("bound", {{"L", "10"}}, 4.9e-324, 0.0, 1.0, Provenance::paper));
    std::ostringstream os;
    emit_json(os, v);
    auto back = parse_json_report(os.str());
    REQUIRE(back.size() == v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        CHECK(back[i].check_id == v[i].check_id);
        CHECK(back[i].params == v[i].params);
        CHECK(back[i].pass == v[i].pass);
        CHECK(back[i].provenance == v[i].provenance);
        for (auto [a, b] : {std::pair{back[i].measured, v[i].measured}, std::pair{back[i].expected, v[i].expected},
                            std::pair{back[i].abs_err, v[i].abs_err}, std::pair{back[i].rel_err, v[i].rel_err},
                            std::pair{back[i].tolerance, v[i].tolerance}}) {
            if (std::isnan(b))
                CHECK(std::isnan(a));
            else
                CHECK(std::memcmp(&a, &b, sizeof a) == 0);
        }
    }
}

TEST_CASE("entries sort by id then params") {
    std::vector<ReportEntry> v{make_entry("b", {}, 0, 0, 0, Provenance::trivial),
                               make_entry("a", {{"N", "2"}}, 0, 0, 0, Provenance::trivial),
                               make_entry("a", {{"N", "1"}}, 0, 0, 0, Provenance::trivial)};
    sort_entries(v);
    CHECK(v[0].params.at("N") == "1");
    CHECK(v[1].params.at("N") == "2");
    CHECK(v[2].check_id == "b");
    CHECK(all_pass(v));
}
