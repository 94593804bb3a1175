#include <catch2/catch_amalgamated.hpp>

#include <variant>

#include "volterra/json_io.hpp"

using namespace volterra;
using nlohmann::json;

TEST_CASE("kernel parsing") {
    const kernel_spec e = kernel_from_json(json::parse(
        R"({"type":"exponential","k":0.5,"theta":2.0})"));
    REQUIRE(std::holds_alternative<exponential_kernel>(e));
    CHECK(std::get<exponential_kernel>(e).k == 0.5);
    CHECK(std::get<exponential_kernel>(e).theta == 2.0);

    const kernel_spec p = kernel_from_json(json::parse(
        R"({"type":"powerlaw","k":0.4,"theta":1.5,"c":2.0})"));
    REQUIRE(std::holds_alternative<power_law_kernel>(p));
    CHECK(std::get<power_law_kernel>(p).c == 2.0);

    const kernel_spec r = kernel_from_json(json::parse(
        R"({"type":"rayleigh","k":0.3,"sigma":1.5})"));
    REQUIRE(std::holds_alternative<rayleigh_kernel>(r));

    const kernel_spec c = kernel_from_json(json::parse(R"({"type":"constant","k":0.5})"));
    REQUIRE(std::holds_alternative<constant_unit_kernel>(c));

    const kernel_spec t = kernel_from_json(json::parse(
        R"({"type":"tabulated","delta":0.5,"betas":[0.8,0.2,0.0]})"));
    REQUIRE(std::holds_alternative<tabulated_kernel>(t));
    CHECK(std::get<tabulated_kernel>(t).betas.size() == 3);
}

TEST_CASE("kernel parsing rejects malformed input") {
    CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"type":"gaussian","k":0.5})")), error);
    CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"k":0.5})")), error);
    CHECK_THROWS_AS(kernel_from_json(json::parse(R"([1,2,3])")), error);
    // Unknown and missing fields.
    CHECK_THROWS_AS(kernel_from_json(json::parse(
                        R"({"type":"exponential","k":0.5,"theta":1.0,"rate":2.0})")),
                    error);
    CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"type":"exponential","k":0.5})")),
                    error);
    CHECK_THROWS_AS(kernel_from_json(json::parse(
                        R"({"type":"exponential","k":"half","theta":1.0})")),
                    error);
    // Structural invariants are enforced at the parse boundary.
    CHECK_THROWS_AS(kernel_from_json(json::parse(
                        R"({"type":"exponential","k":1.5,"theta":1.0})")),
                    error);
    CHECK_THROWS_AS(kernel_from_json(json::parse(
                        R"({"type":"tabulated","delta":0.5,"betas":[1.2,0.9]})")),
                    mass_exceeds_one);
}

TEST_CASE("tabulated kernel round-trips") {
    tabulated_kernel tab;
    tab.delta = 0.125;
    tab.betas = {0.5, 0.25, 0.125, 0.0625, 0.0};
    const json j = kernel_to_json(tab);
    const kernel_spec back = kernel_from_json(j);
    REQUIRE(std::holds_alternative<tabulated_kernel>(back));
    const auto& got = std::get<tabulated_kernel>(back);
    CHECK(got.delta == tab.delta);
    REQUIRE(got.betas.size() == tab.betas.size());
    for (std::size_t i = 0; i < tab.betas.size(); ++i) CHECK(got.betas[i] == tab.betas[i]);
}

TEST_CASE("signal parsing") {
    const input_signal s = signal_from_json(json::parse(
        R"({"atoms":[[0.0,1.0],[0.5,-2.0]],"regular":{"type":"two_plus_sin"}})"));
    REQUIRE(s.atoms.size() == 2);
    CHECK(s.atoms[1].t == 0.5);
    CHECK(s.atoms[1].w == -2.0);
    CHECK(std::holds_alternative<two_plus_sin_signal>(s.regular));

    const input_signal c = signal_from_json(json::parse(
        R"({"regular":{"type":"constant","value":3.5}})"));
    CHECK(c.atoms.empty());
    CHECK(std::get<constant_signal>(c.regular).c == 3.5);

    const input_signal m = signal_from_json(json::parse(
        R"({"regular":{"type":"samples","step":0.25,"values":[1.0,2.0,3.0]}})"));
    CHECK(std::get<sampled_signal>(m.regular).values.size() == 3);

    const input_signal empty = signal_from_json(json::parse(R"({})"));
    CHECK(empty.atoms.empty());
    CHECK(std::get<constant_signal>(empty.regular).c == 0.0);
}

TEST_CASE("signal parsing rejects malformed input") {
    CHECK_THROWS_AS(signal_from_json(json::parse(R"({"atoms":[[0.0]]})")), error);
    CHECK_THROWS_AS(signal_from_json(json::parse(R"({"atoms":[0.0,1.0]})")), error);
    CHECK_THROWS_AS(signal_from_json(json::parse(
                        R"({"regular":{"type":"white_noise"}})")),
                    error);
    CHECK_THROWS_AS(signal_from_json(json::parse(
                        R"({"regular":{"type":"constant","value":1.0,"mean":0.0}})")),
                    error);
    CHECK_THROWS_AS(signal_from_json(json::parse(R"({"phase":1.0})")), error);
    // Atom ordering is validated on the way in.
    CHECK_THROWS_AS(signal_from_json(json::parse(R"({"atoms":[[1.0,1.0],[0.5,1.0]]})")),
                    error);
}

TEST_CASE("certificate serialization") {
    certificate c = resolvent_certificate(0.01, 0.5, norm_kind::sup_windowed, 5.0);
    c = solution_certificate(c, 2.0);
    const json j = certificate_to_json(c);
    CHECK(j.at("norm") == "SUP_WINDOWED");
    CHECK(j.at("window") == 5.0);
    CHECK(j.at("kernel_error") == 0.01);
    CHECK(j.at("k_bound") == 0.5);
    CHECK(j.at("resolvent_error") == Catch::Approx(0.04));
    CHECK(j.at("solution_error") == Catch::Approx(0.08));

    const json plain = certificate_to_json(resolvent_certificate(0.01, 0.5));
    CHECK(plain.at("norm") == "SUP");
    CHECK_FALSE(plain.contains("window"));
}
