#include "trionlab/cli.hpp"

#include "trionlab/analysis.hpp"
#include "trionlab/errors.hpp"
#include "trionlab/exponent_optimizer.hpp"
#include "trionlab/result_cache.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

namespace trionlab::cli {

namespace {

using basis::Model;
using solver::Charge;

constexpr const char* units_note =
    "units: E_* in Ry* (effective Rydberg) unless suffixed _eV/_meV; r in a_B* unless suffixed _A; "
    "masses in m0; angles in rad";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

tb::ChiralIndex parse_chirality(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("chirality must be given as n,m");
    try {
        std::size_t used = 0;
        const int n = std::stoi(text.substr(0, comma), &used);
        const std::string rest = text.substr(comma + 1);
        std::size_t used2 = 0;
        const int m = std::stoi(rest, &used2);
        if (used2 != rest.size() || used != comma) throw UsageError("chirality must be given as n,m");
        return tb::ChiralIndex::canonical(n, m);
    } catch (const std::invalid_argument&) {
        throw UsageError("chirality must be given as n,m");
    } catch (const std::out_of_range&) {
        throw UsageError("chirality out of range");
    }
}

tb::MassAxis parse_axis(const std::string& text)
{
    if (text == "zigzag") return tb::MassAxis::ZigzagReference;
    if (text == "tube") return tb::MassAxis::TubeAxis;
    throw DomainError("unknown mass axis '" + text + "' (expected zigzag or tube)");
}

Cell num(double v) { return v; }
Cell integer(long long v) { return v; }
Cell text(std::string s) { return s; }

// Options shared by every subcommand.
struct Common {
    std::string format = "csv";
    assembly::QuadratureSpec quad;
    tb::TightBindingParams tb;
    std::string mass_axis = "zigzag";

    tb::MassOptions mass_options() const
    {
        tb::MassOptions o;
        o.axis = parse_axis(mass_axis);
        return o;
    }
};

// Radius given directly or through a species and a dielectric constant.
struct RadiusChoice {
    double r = 0.1;
    std::string chirality;
    double epsilon = 3.5;
    CLI::Option* r_opt = nullptr;

    void add(CLI::App* sub)
    {
        r_opt = sub->add_option("--r", r, "Cylinder radius in a_B*");
        auto* c = sub->add_option("--chirality", chirality, "Species n,m (converts with --epsilon)");
        sub->add_option("--epsilon", epsilon, "Dielectric constant");
        r_opt->excludes(c);
    }

    struct Resolved {
        double r;
        bool physical;
        units::EffectiveUnits units;
        tb::EffectiveMasses masses;
    };

    Resolved resolve(const Common& common) const
    {
        Resolved out{r, false, {}, {}};
        if (!chirality.empty()) {
            const auto ch = parse_chirality(chirality);
            out.masses = tb::effective_masses(ch, common.tb, common.mass_options());
            out.units = units::effective_units(out.masses.mu, units::Environment{epsilon});
            out.r = units::dimensionless_radius(tb::radius(ch, common.tb.a), out.units);
            out.physical = true;
        }
        if (!(out.r > 0.0)) throw DomainError("cylinder radius must be positive");
        return out;
    }
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--rel-tol", c.quad.rel_tol, "Relative quadrature tolerance");
    sub->add_option("--abs-tol", c.quad.abs_tol, "Absolute quadrature tolerance");
    sub->add_option("--max-subdivisions", c.quad.max_subdivisions, "Adaptive subdivision budget");
    sub->add_option("--angular-order", c.quad.angular_order, "Gauss-Kronrod order for theta integrals");
    sub->add_option("--tb-t", c.tb.t, "Tight-binding transfer integral (eV)");
    sub->add_option("--tb-s", c.tb.s, "Tight-binding overlap");
    sub->add_option("--lattice-a", c.tb.a, "Graphene lattice constant (Angstrom)");
    sub->add_option("--mass-axis", c.mass_axis, "Mass convention: zigzag or tube");
}

std::string canonical_config(const CLI::App* sub)
{
    std::vector<std::pair<std::string, std::string>> kv;
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name.empty()) continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        kv.emplace_back(name, value);
    }
    std::sort(kv.begin(), kv.end());
    std::string out = "command=" + sub->get_name() + "\n";
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string model_name(Model m) { return basis::to_string(m); }

std::vector<Model> parse_models(const std::vector<std::string>& names)
{
    std::vector<Model> out;
    for (const auto& n : names) out.push_back(basis::parse_model(n));
    if (out.empty()) throw UsageError("at least one model is required");
    return out;
}

std::vector<Charge> parse_charges(const std::vector<std::string>& names)
{
    std::vector<Charge> out;
    for (const auto& n : names) out.push_back(solver::parse_charge(n));
    if (out.empty()) throw UsageError("at least one charge is required");
    return out;
}

Table model_table(const std::vector<analysis::ModelRow>& rows)
{
    Table t;
    t.columns = {"r_aB", "sigma", "model", "method", "charge", "E_X_Ry", "E_T_Ry", "E_B_Ry", "status"};
    for (const auto& row : rows)
        t.rows.push_back({num(row.r), num(row.sigma), text(model_name(row.model)), text(row.method),
                          text(solver::to_string(row.charge)), num(row.E_X), num(row.E_T), num(row.E_B),
                          text(row.status)});
    return t;
}

std::string note(const std::string& key, double v) { return key + "=" + format_number(v); }

} // namespace

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        return std::stod(format_number(*d));
    }
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

} // namespace

std::string render_csv(const Table& table, const std::vector<std::string>& meta)
{
    std::string out;
    for (const auto& m : meta) out += "# " + m + "\n";
    for (const auto& n : table.notes) out += "# note: " + n + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_escape(table.columns[i]);
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(cell_text(row[i]));
        out += "\n";
    }
    return out;
}

std::string render_json(const Table& table, const std::vector<std::string>& meta)
{
    nlohmann::ordered_json j;
    j["meta"] = meta;
    j["notes"] = table.notes;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::map<std::string, std::string> parse_config_file(const std::string& content)
{
    std::map<std::string, std::string> out;
    std::istringstream in(content);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& environment)
{
    CLI::App app{"Trion and exciton binding energies on a cylinder", "trionlab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.set_version_flag("--version", std::string("trionlab ") + version);

    std::string output_path, cache_dir, config_path;
    bool no_cache = false;
    int threads = 0;
    app.add_option("--output,-o", output_path, "Write to this file instead of stdout");
    app.add_option("--cache-dir", cache_dir, "Result cache directory (default: $TRIONLAB_CACHE)");
    app.add_flag("--no-cache", no_cache, "Disable the result cache");
    app.add_option("--threads", threads, "Worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    app.add_option("--config", config_path, "File of key = value defaults; flags take precedence");

    Common common;
    std::function<Table()> action;
    std::vector<std::string> meta_notes;

    // masses
    auto* masses = app.add_subcommand("masses", "Effective masses from the tight-binding bands");
    add_common(masses, common);
    std::string m_chir = "6,5";
    double m_eps = 0.0;
    masses->add_option("--chirality", m_chir, "Species n,m");
    masses->add_option("--epsilon", m_eps, "Also convert to effective units at this dielectric constant");
    masses->callback([&] {
        action = [&] {
            const auto ch = parse_chirality(m_chir);
            const auto edge = tb::band_edge(ch, common.tb, common.mass_options());
            Table t;
            t.columns = {"n", "m", "radius_A", "chiral_angle_rad", "subband", "gap_eV", "m_e_m0", "m_h_m0",
                         "mu_m0", "sigma", "v_F_m_s"};
            std::vector<Cell> row{integer(ch.n), integer(ch.m), num(tb::radius(ch, common.tb.a)),
                                  num(edge.chiral_angle), integer(edge.subband), num(edge.gap),
                                  num(edge.masses.m_e), num(edge.masses.m_h), num(edge.masses.mu),
                                  num(edge.masses.sigma), num(tb::fermi_velocity(common.tb))};
            if (m_eps != 0.0) {
                const auto u = units::effective_units(edge.masses.mu, units::Environment{m_eps});
                for (const char* c : {"epsilon", "Ry_eV", "aB_A", "r_aB"}) t.columns.push_back(c);
                row.push_back(num(m_eps));
                row.push_back(num(u.rydberg));
                row.push_back(num(u.bohr));
                row.push_back(num(units::dimensionless_radius(tb::radius(ch, common.tb.a), u)));
            }
            t.rows.push_back(row);
            t.notes.push_back(std::string("mass axis: ") + common.mass_axis);
            return t;
        };
    });

    // bands
    auto* bands = app.add_subcommand("bands", "Band-edge subband dispersion");
    add_common(bands, common);
    std::string b_chir = "6,5";
    int b_points = 201;
    double b_half = 0.3;
    bands->add_option("--chirality", b_chir, "Species n,m");
    bands->add_option("--points", b_points, "Samples along the line");
    bands->add_option("--half-width", b_half, "Half width of the k window (1/Angstrom)");
    bands->callback([&] {
        action = [&] {
            const auto ch = parse_chirality(b_chir);
            const auto edge = tb::band_edge(ch, common.tb, common.mass_options());
            const auto pts = tb::line_dispersion(ch, common.tb, edge.subband, b_half, b_points);
            Table t;
            t.columns = {"k_axial_invA", "valence_eV", "conduction_eV"};
            for (const auto& p : pts) t.rows.push_back({num(p.k_axial), num(p.valence), num(p.conduction)});
            t.notes.push_back("subband=" + std::to_string(edge.subband));
            return t;
        };
    });

    // exciton
    auto* exciton = app.add_subcommand("exciton", "Exciton ground-state energy");
    add_common(exciton, common);
    RadiusChoice x_rad;
    std::string x_model = "2d";
    x_rad.add(exciton);
    exciton->add_option("--model", x_model, "1d or 2d");
    exciton->callback([&] {
        action = [&] {
            const auto rc = x_rad.resolve(common);
            const Model model = basis::parse_model(x_model);
            const auto bases = solver::ModelBases::presets(model);
            const double ex = solver::exciton_energy(rc.r, model, bases.exciton, common.quad);
            Table t;
            t.columns = {"r_aB", "model", "E_X_Ry"};
            std::vector<Cell> row{num(rc.r), text(model_name(model)), num(ex)};
            if (rc.physical) {
                for (const char* c : {"Ry_eV", "aB_A", "E_X_meV"}) t.columns.push_back(c);
                row.push_back(num(rc.units.rydberg));
                row.push_back(num(rc.units.bohr));
                row.push_back(num(1000.0 * units::to_physical_energy(ex, rc.units)));
            }
            t.rows.push_back(row);
            return t;
        };
    });

    // trion
    auto* trion = app.add_subcommand("trion", "Trion energy and binding energy");
    add_common(trion, common);
    RadiusChoice t_rad;
    std::string t_model = "2d", t_charge = "-";
    double t_sigma = 0.0;
    t_rad.add(trion);
    trion->add_option("--model", t_model, "1d or 2d");
    trion->add_option("--sigma", t_sigma, "Mass fraction m_e/m_h in [0, 1]");
    trion->add_option("--charge", t_charge, "- (negative) or + (positive)");
    trion->callback([&] {
        action = [&] {
            const auto rc = t_rad.resolve(common);
            const Model model = basis::parse_model(t_model);
            const Charge charge = solver::parse_charge(t_charge);
            const auto res =
                solver::binding_energy(rc.r, t_sigma, charge, model, solver::ModelBases::presets(model), common.quad);
            Table t;
            t.columns = {"r_aB", "model", "sigma", "charge", "E_X_Ry", "E_T_Ry", "E_B_Ry", "stable"};
            std::vector<Cell> row{num(rc.r),     text(model_name(model)), num(t_sigma),
                                  text(solver::to_string(charge)), num(res.E_X), num(res.E_T),
                                  num(res.E_B),  integer(res.stable() ? 1 : 0)};
            if (rc.physical) {
                for (const char* c : {"Ry_eV", "aB_A", "E_B_meV"}) t.columns.push_back(c);
                row.push_back(num(rc.units.rydberg));
                row.push_back(num(rc.units.bohr));
                row.push_back(num(1000.0 * units::to_physical_energy(res.E_B, rc.units)));
            }
            t.rows.push_back(row);
            t.notes.push_back("E_B = E_X - E_T with signed ground-state energies");
            return t;
        };
    });

    // hf
    auto* hfc = app.add_subcommand("hf", "Hartree-Fock trion at sigma = 0");
    add_common(hfc, common);
    RadiusChoice h_rad;
    std::string h_model = "2d";
    hf::ScfOptions h_opt;
    h_rad.add(hfc);
    hfc->add_option("--model", h_model, "1d or 2d");
    hfc->add_option("--mixing", h_opt.mixing, "Linear mixing weight of the new orbital");
    hfc->add_option("--tol", h_opt.tol, "Orbital-energy tolerance (Ry*)");
    hfc->add_option("--max-iter", h_opt.max_iter, "Iteration limit");
    hfc->callback([&] {
        action = [&] {
            const auto rc = h_rad.resolve(common);
            const Model model = basis::parse_model(h_model);
            const auto st = hf::scf(basis::preset_basis(basis::hf_preset(model)), rc.r, h_opt, common.quad);
            const double ex = solver::exciton_energy(rc.r, model,
                                                     basis::preset_basis(basis::exciton_preset(model)), common.quad);
            Table t;
            t.columns = {"r_aB", "model", "method", "epsilon0_Ry", "E_X_Ry", "E_T_HF_Ry", "E_B_HF_Ry",
                         "iterations", "converged"};
            std::vector<Cell> row{num(rc.r),        text(model_name(model)), text("hf"),
                                  num(st.epsilon0), num(ex),                 num(st.E_T_HF),
                                  num(ex - st.E_T_HF), integer(st.iterations), integer(st.converged ? 1 : 0)};
            if (rc.physical) {
                t.columns.push_back("E_B_HF_meV");
                row.push_back(num(1000.0 * units::to_physical_energy(ex - st.E_T_HF, rc.units)));
            }
            t.rows.push_back(row);
            t.notes.push_back("E_X from the variational exciton solver in the same model");
            return t;
        };
    });

    // optimize
    auto* opt = app.add_subcommand("optimize", "Steepest-descent optimization of Gaussian exponents");
    add_common(opt, common);
    std::string o_problem = "exciton", o_model = "2d", o_charge = "-";
    double o_r0 = 0.1;
    optimizer::Settings o_set;
    std::vector<double> o_alphas;
    opt->add_option("--problem", o_problem, "exciton, trion or hf");
    opt->add_option("--model", o_model, "1d or 2d");
    opt->add_option("--r0", o_r0, "Reference radius (a_B*)");
    opt->add_option("--sigma", o_set.sigma, "Mass fraction for the trion objective");
    opt->add_option("--charge", o_charge, "Trion charge");
    opt->add_option("--max-steps", o_set.max_steps, "Descent step limit");
    opt->add_option("--energy-tol", o_set.energy_tol, "Stop when a step gains less (Ry*)");
    opt->add_option("--alphas", o_alphas, "Starting exponents for one-particle problems")->delimiter(',');
    opt->callback([&] {
        action = [&] {
            const auto problem = optimizer::parse_problem(o_problem);
            const Model model = basis::parse_model(o_model);
            o_set.charge = solver::parse_charge(o_charge);
            o_set.quad = common.quad;
            basis::BasisSpec start = basis::preset_basis(
                problem == optimizer::Problem::Exciton ? basis::exciton_preset(model)
                : problem == optimizer::Problem::Trion ? basis::trion_preset(model)
                                                       : basis::hf_preset(model));
            if (!o_alphas.empty()) {
                if (problem == optimizer::Problem::Trion)
                    throw UsageError("--alphas applies to one-particle problems only");
                start.axial.alphas_i = o_alphas;
            }
            const auto run = optimizer::optimize(problem, start, o_r0, o_set);
            if (!run.error.empty()) throw NumericalError("optimization aborted: " + run.error);
            Table t;
            t.columns = {"list", "index", "alpha_initial", "alpha_final"};
            const char* names[3] = {"i", "j", "k"};
            const std::vector<double>* ini[3] = {&run.initial.axial.alphas_i, &run.initial.axial.alphas_j,
                                                 &run.initial.axial.alphas_k};
            const std::vector<double>* fin[3] = {&run.final.axial.alphas_i, &run.final.axial.alphas_j,
                                                 &run.final.axial.alphas_k};
            for (int l = 0; l < 3; ++l)
                for (std::size_t m = 0; m < ini[l]->size(); ++m)
                    t.rows.push_back({text(names[l]), integer(static_cast<long long>(m)), num((*ini[l])[m]),
                                      num((*fin[l])[m])});
            t.notes.push_back(note("objective_initial_Ry", run.history.front()));
            t.notes.push_back(note("objective_final_Ry", run.history.back()));
            t.notes.push_back("accepted=" + std::to_string(run.accepted) +
                              " rejected=" + std::to_string(run.rejected) +
                              " converged=" + std::to_string(run.converged ? 1 : 0));
            return t;
        };
    });

    // probability
    auto* prob = app.add_subcommand("probability", "Angular probability distributions");
    add_common(prob, common);
    RadiusChoice p_rad;
    std::string p_kind = "trion", p_model = "2d", p_charge = "-";
    double p_sigma = 0.0;
    int p_grid = 201;
    p_rad.add(prob);
    prob->add_option("--kind", p_kind, "trion, exciton, hf or hf-diff")
        ->check(CLI::IsMember({"trion", "exciton", "hf", "hf-diff"}));
    prob->add_option("--model", p_model, "1d or 2d");
    prob->add_option("--sigma", p_sigma, "Mass fraction (trion kind)");
    prob->add_option("--charge", p_charge, "Trion charge");
    prob->add_option("--grid", p_grid, "Points per angle over [-pi, pi]");
    prob->callback([&] {
        action = [&] {
            const auto rc = p_rad.resolve(common);
            const Model model = basis::parse_model(p_model);
            Table t;
            auto emit2d = [&](const Eigen::MatrixXd& v, const std::vector<double>& th, const char* col) {
                t.columns = {"theta1_rad", "theta2_rad", col};
                for (std::size_t i = 0; i < th.size(); ++i)
                    for (std::size_t j = 0; j < th.size(); ++j) t.rows.push_back({num(th[i]), num(th[j]), num(v(i, j))});
            };
            auto full_grid = [&](double sigma, Charge charge) {
                const auto b = basis::preset_basis(basis::trion_preset(model));
                const solver::TrionProblem problem(b, rc.r, common.quad);
                const auto sp = problem.solve(sigma, charge);
                return analysis::trion_probability(sp.coefficients.col(0), problem.basis(), rc.r, p_grid);
            };
            auto hf_grid = [&] {
                const auto st = hf::scf(basis::preset_basis(basis::hf_preset(model)), rc.r, {}, common.quad);
                const auto b = basis::at_radius(basis::preset_basis(basis::hf_preset(model)), rc.r);
                return analysis::hf_probability(st.orbital_coeffs, b, rc.r, p_grid);
            };
            if (p_kind == "exciton") {
                const auto b = basis::at_radius(basis::preset_basis(basis::exciton_preset(model)), rc.r);
                const auto m = assembly::assemble_exciton(b, rc.r, common.quad);
                const auto sp = solver::solve_generalized(m.K + m.U, m.S);
                const auto g = analysis::exciton_probability(sp.coefficients.col(0), b, rc.r, p_grid);
                t.columns = {"theta_rad", "P_per_rad"};
                for (std::size_t i = 0; i < g.theta.size(); ++i) t.rows.push_back({num(g.theta[i]), num(g.values(i, 0))});
            } else if (p_kind == "trion") {
                const auto g = full_grid(p_sigma, solver::parse_charge(p_charge));
                emit2d(g.values, g.theta, "P_per_rad2");
            } else if (p_kind == "hf") {
                const auto g = hf_grid();
                emit2d(g.values, g.theta, "P_per_rad2");
            } else {
                const auto full = full_grid(0.0, Charge::Negative);
                const auto d = analysis::hf_difference(full, hf_grid());
                emit2d(d, full.theta, "diff_pct");
                t.notes.push_back("100 (P_hf - P_full) / P_full, full solution at sigma = 0, S-");
            }
            t.notes.push_back(note("r_aB", rc.r));
            return t;
        };
    });

    // sweep-radius
    auto* swr = app.add_subcommand("sweep-radius", "E_X, E_T, E_B against the radius");
    add_common(swr, common);
    double sr_from = 0.02, sr_to = 0.3;
    int sr_points = 30;
    std::vector<double> sr_sigmas{0.0};
    std::vector<std::string> sr_models{"1d", "2d"}, sr_methods{"full"}, sr_charges{"-"};
    swr->add_option("--from", sr_from, "First radius (a_B*)");
    swr->add_option("--to", sr_to, "Last radius (a_B*)");
    swr->add_option("--points", sr_points, "Number of radii");
    swr->add_option("--sigmas", sr_sigmas, "Mass fractions")->delimiter(',');
    swr->add_option("--models", sr_models, "Models")->delimiter(',');
    swr->add_option("--methods", sr_methods, "full and/or hf")->delimiter(',');
    swr->add_option("--charges", sr_charges, "Trion charges")->delimiter(',');
    swr->callback([&] {
        action = [&] {
            analysis::ModelSweep sw;
            sw.radii = analysis::linspace(sr_from, sr_to, sr_points);
            sw.sigmas = sr_sigmas;
            sw.models = parse_models(sr_models);
            sw.methods = sr_methods;
            sw.charges = parse_charges(sr_charges);
            sw.quad = common.quad;
            return model_table(analysis::sweep_model_comparison(sw));
        };
    });

    // sweep-sigma
    auto* sws = app.add_subcommand("sweep-sigma", "E_B against the mass fraction at fixed radius");
    add_common(sws, common);
    double ss_r = 0.1, ss_from = 0.0, ss_to = 1.0;
    int ss_points = 11;
    std::vector<std::string> ss_models{"1d", "2d"}, ss_charges{"-", "+"};
    sws->add_option("--r", ss_r, "Radius (a_B*)");
    sws->add_option("--from", ss_from, "First sigma");
    sws->add_option("--to", ss_to, "Last sigma");
    sws->add_option("--points", ss_points, "Number of sigma values");
    sws->add_option("--models", ss_models, "Models")->delimiter(',');
    sws->add_option("--charges", ss_charges, "Trion charges")->delimiter(',');
    sws->callback([&] {
        action = [&] {
            analysis::ModelSweep sw;
            sw.radii = {ss_r};
            sw.sigmas = analysis::linspace(ss_from, ss_to, ss_points);
            sw.models = parse_models(ss_models);
            sw.charges = parse_charges(ss_charges);
            sw.quad = common.quad;
            auto t = model_table(analysis::sweep_model_comparison(sw));
            t.notes.push_back("S+ at sigma = 0 is undefined and reported with a status message");
            return t;
        };
    });

    // sweep-epsilon
    auto* swe = app.add_subcommand("sweep-epsilon", "(6,5)-style dielectric sweep with power-law fit");
    add_common(swe, common);
    std::string se_chir = "6,5";
    double se_from = 2.0, se_to = 5.0;
    int se_points = 13;
    swe->add_option("--chirality", se_chir, "Species n,m");
    swe->add_option("--from", se_from, "First dielectric constant");
    swe->add_option("--to", se_to, "Last dielectric constant");
    swe->add_option("--points", se_points, "Number of values");
    swe->callback([&] {
        action = [&] {
            const auto ch = parse_chirality(se_chir);
            const auto sw = analysis::sweep_epsilon(ch, analysis::linspace(se_from, se_to, se_points), common.tb,
                                                    common.mass_options(), common.quad);
            Table t;
            t.columns = {"epsilon", "Ry_eV", "aB_A", "r_aB", "E_X_Ry", "E_T_Ry", "E_B_Ry", "E_X_meV", "E_B_meV",
                         "status"};
            for (const auto& r : sw.rows)
                t.rows.push_back({num(r.epsilon), num(r.rydberg_eV), num(r.bohr_A), num(r.r_aB), num(r.E_X),
                                  num(r.E_T), num(r.E_B), num(r.E_X_meV), num(r.E_B_meV), text(r.status)});
            t.notes.push_back("2D model, S- trion at sigma = 0; E_X_meV is |E_X|");
            if (sw.trion_fit) {
                t.notes.push_back("fit E_B = A eps^p + C with A and C in eV (not meV)");
                t.notes.push_back(note("fit_A_eV", sw.trion_fit->A));
                t.notes.push_back(note("fit_p", sw.trion_fit->p));
                t.notes.push_back(note("fit_C_eV", sw.trion_fit->C));
                t.notes.push_back(note("fit_residual_eV", sw.trion_fit->residual_norm));
            } else {
                t.notes.push_back("power-law fit failed");
            }
            if (sw.exciton_fit) t.notes.push_back(note("exciton_loglog_slope", sw.exciton_fit->slope));
            return t;
        };
    });

    // sweep-species
    auto* swsp = app.add_subcommand("sweep-species", "All semiconducting species in a radius range");
    add_common(swsp, common);
    double sp_rmin = 3.0, sp_rmax = 15.0, sp_eps = 3.5;
    std::vector<std::string> sp_models{"1d", "2d"};
    swsp->add_option("--rmin", sp_rmin, "Smallest radius (Angstrom)");
    swsp->add_option("--rmax", sp_rmax, "Largest radius (Angstrom)");
    swsp->add_option("--epsilon", sp_eps, "Dielectric constant");
    swsp->add_option("--models", sp_models, "Models")->delimiter(',');
    swsp->callback([&] {
        action = [&] {
            const auto sw = analysis::sweep_species(sp_rmin, sp_rmax, units::Environment{sp_eps},
                                                    parse_models(sp_models), common.tb, common.mass_options(),
                                                    common.quad);
            Table t;
            t.columns = {"n", "m", "radius_A", "m_e_m0", "m_h_m0", "mu_m0", "sigma", "Ry_eV", "aB_A", "r_aB",
                         "E_B_minus_1D_meV", "E_B_plus_1D_meV", "E_B_minus_2D_meV", "E_B_plus_2D_meV",
                         "gap_minus_pct", "gap_plus_pct", "detectable", "status"};
            for (const auto& r : sw.rows)
                t.rows.push_back({integer(r.chirality.n), integer(r.chirality.m), num(r.radius_A),
                                  num(r.masses.m_e), num(r.masses.m_h), num(r.masses.mu), num(r.masses.sigma),
                                  num(r.rydberg_eV), num(r.bohr_A), num(r.r_aB), num(r.E_B_meV[0][0]),
                                  num(r.E_B_meV[0][1]), num(r.E_B_meV[1][0]), num(r.E_B_meV[1][1]),
                                  num(r.gap_pct[0]), num(r.gap_pct[1]), integer(r.detectable ? 1 : 0),
                                  text(r.status)});
            t.notes.push_back("detectable: best-model S- binding energy above 26 meV");
            t.notes.push_back(note("max_gap_pct", sw.max_gap_pct));
            t.notes.push_back(note("mean_gap_pct", sw.mean_gap_pct));
            t.notes.push_back(note("detectability_boundary_A", sw.boundary_A));
            return t;
        };
    });

    // Merge the config file: its keys become flags unless given on the command line.
    std::vector<std::string> args = args_in;
    try {
        for (std::size_t i = 0; i + 1 < args.size(); ++i)
            if (args[i] == "--config") config_path = args[i + 1];
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw UsageError("cannot read config file " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            for (const auto& [key, value] : parse_config_file(buf.str())) {
                const std::string flag = "--" + key;
                if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
                if (value == "true" || value == "false") {
                    if (value == "true") args.push_back(flag);
                } else {
                    args.push_back(flag);
                    args.push_back(value);
                }
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? 0 : 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    if (threads > 0) omp_set_num_threads(threads);
    if (cache_dir.empty() && !no_cache) {
        const auto it = environment.find("TRIONLAB_CACHE");
        if (it != environment.end()) cache_dir = it->second;
    }

    const std::string config = canonical_config(sub);
    const std::string key = cache::hex64(cache::fnv1a(config + "version=" + version + "\n"));

    auto emit = [&](const std::string& text) -> int {
        if (output_path.empty()) {
            out << text;
            return 0;
        }
        std::ofstream f(output_path, std::ios::binary | std::ios::trunc);
        f << text;
        if (!f) {
            err << "error: cannot write " << output_path << "\n";
            return 1;
        }
        return 0;
    };

    std::unique_ptr<cache::ResultCache> store;
    if (!no_cache && !cache_dir.empty()) {
        store = std::make_unique<cache::ResultCache>(cache_dir);
        if (auto hit = store->load(key, config, err)) return emit(*hit);
    }

    try {
        Table table = action();
        std::vector<std::string> meta{std::string("trionlab ") + version, "command: " + sub->get_name(),
                                      "config_hash: " + key, units_note};
        const std::string text =
            common.format == "json" ? render_json(table, meta) : render_csv(table, meta);
        if (store) {
            try {
                store->store(key, config, text);
            } catch (const std::exception& e) {
                err << "warning: cache write failed: " << e.what() << "\n";
            }
        }
        return emit(text);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace trionlab::cli
