#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qerror.hpp"

namespace qb {

using ordered_json = nlohmann::ordered_json;

namespace {

const char* source_name(RunConfig::PhiSource s) {
    switch (s) {
        case RunConfig::PhiSource::Block: return "block";
        case RunConfig::PhiSource::File: return "file";
        case RunConfig::PhiSource::OneHot: return "one_hot";
    }
    return "?";
}

RunConfig::PhiSource source_from_name(const std::string& s) {
    if (s == "block") return RunConfig::PhiSource::Block;
    if (s == "file") return RunConfig::PhiSource::File;
    if (s == "one_hot") return RunConfig::PhiSource::OneHot;
    fail(ErrorKind::Config, "config: unknown phi.kind \"" + s + "\"");
}

} // namespace

void validate_config(const RunConfig& config) {
    const double q = config.space.q;
    if (!(q > -1.0 && q <= 1.0))
        fail(ErrorKind::Config, "config: space.q must lie in (-1, 1]");
    if (config.n_max < 1) fail(ErrorKind::Config, "config: n_max must be >= 1");
    if (config.tol <= 0.0) fail(ErrorKind::Config, "config: tol must be positive");
    if (config.rank_tol <= 0.0)
        fail(ErrorKind::Config, "config: rank_tol must be positive");

    switch (config.dsf.variant) {
        case DsfVariant::FermionicQuadratic:
            if (q != 1.0)
                fail(ErrorKind::Config,
                     "config: the quadratic structure function describes composites of "
                     "undeformed constituents; it cannot pair with space.q < 1");
            break;
        case DsfVariant::QFermionSquare:
        case DsfVariant::Parameterized:
            if (q == 1.0)
                fail(ErrorKind::Config,
                     "config: the q-fermion structure functions describe deformed "
                     "constituents; they cannot pair with space.q = 1");
            if (std::abs(config.dsf.q - q) > 1e-12)
                fail(ErrorKind::Config,
                     "config: dsf.q and space.q disagree ("
                     + std::to_string(config.dsf.q) + " vs " + std::to_string(q) + ")");
            break;
        case DsfVariant::Tabulated:
            if (static_cast<int>(config.dsf.values.size()) < config.n_max + 2)
                fail(ErrorKind::Config,
                     "config: tabulated dsf.values must cover n = 0 .. n_max + 1");
            break;
    }

    switch (config.source) {
        case RunConfig::PhiSource::Block:
            if (q != 1.0)
                fail(ErrorKind::Config,
                     "config: the block family solves the q = 1 constraint system only");
            if (config.m < 1 || config.modes < 1)
                fail(ErrorKind::Config, "config: phi.m and phi.modes must be >= 1");
            break;
        case RunConfig::PhiSource::OneHot:
            if (q == 1.0)
                fail(ErrorKind::Config,
                     "config: one-hot families are the q < 1 solution shape; use the "
                     "block generator at q = 1");
            if (config.modes < 1) fail(ErrorKind::Config, "config: phi.modes must be >= 1");
            break;
        case RunConfig::PhiSource::File:
            if (config.path.empty())
                fail(ErrorKind::Config, "config: phi.kind \"file\" needs phi.path");
            break;
    }

    if (q != 1.0 && config.n_max > config.space.cutoff)
        fail(ErrorKind::Config,
             "config: a q < 1 ladder of depth n_max=" + std::to_string(config.n_max)
             + " needs space.cutoff >= n_max (got "
             + std::to_string(config.space.cutoff) + ")");
}

PhiFamily realize_phi(const RunConfig& config) {
    PhiFamily family;
    switch (config.source) {
        case RunConfig::PhiSource::Block:
            family = generate_family(config.space.d_a, config.space.d_b, config.m,
                                     config.modes, config.seed);
            break;
        case RunConfig::PhiSource::OneHot:
            family = one_hot_family(config.space.d_a, config.space.d_b, config.space.q,
                                    config.modes);
            break;
        case RunConfig::PhiSource::File: {
            std::ifstream in(config.path);
            if (!in)
                fail(ErrorKind::Io, "config: cannot read phi file " + config.path);
            std::ostringstream buf;
            buf << in.rdbuf();
            family = phi_from_json(buf.str());
            break;
        }
    }
    if (family.modes() == 0) fail(ErrorKind::Config, "config: empty phi family");
    if (family.d_a != config.space.d_a || family.d_b != config.space.d_b)
        fail(ErrorKind::Config,
             "config: phi family shape " + std::to_string(family.d_a) + "x"
             + std::to_string(family.d_b) + " does not match the space");
    if (config.source == RunConfig::PhiSource::File
        && std::abs(family.q - config.space.q) > 1e-12)
        fail(ErrorKind::Config, "config: phi file q does not match space.q");
    family.q = config.space.q;
    return family;
}

RunConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorKind::Config, std::string("config: invalid JSON: ") + e.what());
    }
    try {
        RunConfig c;
        const auto& sp = j.at("space");
        c.space.d_a = sp.at("d_a").get<int>();
        c.space.d_b = sp.at("d_b").get<int>();
        c.space.q = sp.at("q").get<double>();
        c.space.cutoff = sp.at("cutoff").get<int>();

        const auto& ph = j.at("phi");
        c.source = source_from_name(ph.at("kind").get<std::string>());
        if (ph.contains("m")) c.m = ph.at("m").get<int>();
        if (ph.contains("modes")) c.modes = ph.at("modes").get<int>();
        if (ph.contains("seed")) c.seed = ph.at("seed").get<std::uint64_t>();
        if (ph.contains("path")) c.path = ph.at("path").get<std::string>();

        const auto& df = j.at("dsf");
        const DsfVariant variant = dsf_variant_from_name(df.at("variant").get<std::string>());
        switch (variant) {
            case DsfVariant::FermionicQuadratic:
                c.dsf = DsfSpec::fermionic(df.at("m").get<int>());
                break;
            case DsfVariant::QFermionSquare:
                c.dsf = DsfSpec::q_fermion(df.at("q").get<double>());
                break;
            case DsfVariant::Parameterized:
                c.dsf = DsfSpec::parameterized(df.at("q").get<double>(),
                                               df.at("p1").get<double>(),
                                               df.at("p2").get<double>(),
                                               df.at("p3").get<double>());
                break;
            case DsfVariant::Tabulated:
                c.dsf = DsfSpec::tabulated(df.at("values").get<std::vector<double>>());
                break;
        }

        c.n_max = j.at("n_max").get<int>();
        if (j.contains("tol")) c.tol = j.at("tol").get<double>();
        if (j.contains("rank_tol")) c.rank_tol = j.at("rank_tol").get<double>();
        return c;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorKind::Config, std::string("config: ") + e.what());
    }
}

std::string config_to_json(const RunConfig& config) {
    ordered_json j;
    j["space"] = {{"d_a", config.space.d_a},
                  {"d_b", config.space.d_b},
                  {"q", config.space.q},
                  {"cutoff", config.space.cutoff}};
    ordered_json ph;
    ph["kind"] = source_name(config.source);
    switch (config.source) {
        case RunConfig::PhiSource::Block:
            ph["m"] = config.m;
            ph["modes"] = config.modes;
            if (config.seed) ph["seed"] = *config.seed;
            break;
        case RunConfig::PhiSource::OneHot:
            ph["modes"] = config.modes;
            break;
        case RunConfig::PhiSource::File:
            ph["path"] = config.path;
            break;
    }
    j["phi"] = ph;
    ordered_json df;
    df["variant"] = dsf_variant_name(config.dsf.variant);
    switch (config.dsf.variant) {
        case DsfVariant::FermionicQuadratic:
            df["m"] = config.dsf.m;
            break;
        case DsfVariant::QFermionSquare:
            df["q"] = config.dsf.q;
            break;
        case DsfVariant::Parameterized:
            df["q"] = config.dsf.q;
            df["p1"] = config.dsf.p1;
            df["p2"] = config.dsf.p2;
            df["p3"] = config.dsf.p3;
            break;
        case DsfVariant::Tabulated:
            df["values"] = config.dsf.values;
            break;
    }
    j["dsf"] = df;
    j["n_max"] = config.n_max;
    j["tol"] = config.tol;
    j["rank_tol"] = config.rank_tol;
    return j.dump(2) + "\n";
}

} // namespace qb
