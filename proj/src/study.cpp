#include "ifem/study.hpp"

#include "ifem/assembly.hpp"
#include "ifem/fe_space.hpp"
#include "ifem/interface.hpp"
#include "ifem/interface_quadrature.hpp"
#include "ifem/linear_solver.hpp"
#include "ifem/mesh.hpp"
#include "ifem/weighted_norms.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace ifem {

int default_cut_depth(int dim) { return dim == 2 ? 6 : 4; }

void validate(const StudyConfig& config)
{
    require(config.dim == 2 || config.dim == 3, "dim must be 2 or 3");
    require(config.min_exp >= 2, "min-exp must be at least 2");
    require(config.max_exp >= config.min_exp, "max-exp must not be smaller than min-exp");
    require(config.max_exp <= (config.dim == 2 ? 10 : 7), "max-exp exceeds the supported range");
    require(config.dim == 2 || config.max_exp <= 5 || config.allow_large_3d,
            "3D levels beyond 32 cells per axis need --allow-large-3d");
    require(!config.alphas.empty(), "at least one alpha is required");
    for (const double a : config.alphas) {
        require(a >= 0.0 && a < 0.5, "alphas must lie in [0, 0.5)");
    }
    require(config.degree >= 1 && config.degree <= 2, "degree must be 1 or 2");
    require(!config.sigma || *config.sigma > 0.0, "sigma must be positive");
    require(config.cg_tol > 0.0, "cg-tol must be positive");
    require(!config.cut_depth || (*config.cut_depth >= 0 && *config.cut_depth <= 12), "cut-depth must lie in [0, 12]");
    require(config.interface_order >= 1, "interface order must be at least 1");
    require(config.center.empty() || config.center.size() == static_cast<std::size_t>(config.dim),
            "center must have dim coordinates");
    require(config.radius > 0.0, "radius must be positive");
    const double c0 = 0.3;
    for (int d = 0; d < config.dim; ++d) {
        const double c = config.center.empty() ? c0 : config.center[static_cast<std::size_t>(d)];
        require(c - config.radius > 0.0 && c + config.radius < 1.0, "interface must lie strictly inside the unit box");
    }
}

namespace {

template <int dim>
SphereInterface<dim> make_interface(const StudyConfig& config)
{
    Point<dim> c = Point<dim>::Constant(0.3);
    if (!config.center.empty()) {
        for (int d = 0; d < dim; ++d) {
            c[d] = config.center[static_cast<std::size_t>(d)];
        }
    }
    return SphereInterface<dim>(c, config.radius);
}

template <int dim>
std::vector<ConvergenceRecord> run_levels(const StudyConfig& config, std::ostream* log)
{
    const SphereInterface<dim> interface = make_interface<dim>(config);
    const ExactSolution<dim> exact = kinked_potential(interface);
    const double density = kinked_potential_density(interface);
    const ErrorQuadrature error_quad{
        config.quad_points > 0 ? config.quad_points : static_cast<std::size_t>(config.degree) + 3,
        config.cut_depth.value_or(default_cut_depth(dim))};
    const auto assembly_rule = gauss_rule<dim>(static_cast<std::size_t>(config.degree) + 2);

    std::vector<ConvergenceRecord> records;
    for (int k = config.min_exp; k <= config.max_exp; ++k) {
        const auto start = std::chrono::steady_clock::now();
        const std::size_t n_c = std::size_t{1} << k;
        const Mesh<dim> mesh(n_c);
        const FeSpace<dim> space(mesh, config.degree);

        const SparseMatrix a = assemble_stiffness(space, assembly_rule);
        const auto iq = immersed_quadrature(interface, mesh, config.interface_order);
        Vector rhs = assemble_interface_load(space, iq, [density](const Point<dim>&) { return density; }).values;
        rhs += assemble_volume_load(space, [](const Point<dim>&) { return 0.0; }, assembly_rule).values;
        const auto [a_bc, rhs_bc] = apply_dirichlet(a, rhs, space, exact.value);

        const SolveResult solve = cg_solve(a_bc, rhs_bc, config.cg_tol);
        if (!solve.report.converged) {
            throw SolverFailure(fmt::format("CG did not converge on n_c = {} after {} iterations (residual {:.3e})",
                                            n_c, solve.report.iterations, solve.report.final_relative_residual));
        }

        const auto errors = weighted_errors(space, solve.solution, exact, interface, config.alphas, error_quad);
        for (std::size_t i = 0; i < config.alphas.size(); ++i) {
            ConvergenceRecord r;
            r.dim = dim;
            r.n_cells_per_axis = n_c;
            r.h = mesh.h();
            r.n_dofs = space.n_dofs();
            r.alpha = config.alphas[i];
            r.err_L2_alpha = errors.l2[i];
            r.err_H1semi_alpha = errors.h1_semi[i];
            r.err_H1_alpha = errors.h1_full[i];
            records.push_back(r);
        }
        if (log != nullptr) {
            const double sigma = config.sigma.value_or(default_sigma<dim>());
            const std::size_t n_in = classify_cells(mesh, interface, sigma).in_cells.size();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            *log << fmt::format("[{}D] n_c = {:4d}  dofs = {:8d}  layer cells = {:6d}  cg iterations = {:5d}  ({:.1f} s)\n",
                                dim, n_c, space.n_dofs(), n_in, solve.report.iterations, secs);
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const auto& l, const auto& r) {
        return l.n_cells_per_axis != r.n_cells_per_axis ? l.n_cells_per_axis < r.n_cells_per_axis : l.alpha < r.alpha;
    });
    attach_eoc(records);
    return records;
}

std::string format_real(double v) { return fmt::format("{:.15e}", v); }

std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; }

} // namespace

std::vector<ConvergenceRecord> run_study(const StudyConfig& config, std::ostream* log)
{
    validate(config);
    return config.dim == 2 ? run_levels<2>(config, log) : run_levels<3>(config, log);
}

void attach_eoc(std::vector<ConvergenceRecord>& records)
{
    std::map<std::pair<std::size_t, double>, const ConvergenceRecord*> by_level;
    for (const auto& r : records) {
        by_level[{r.n_cells_per_axis, r.alpha}] = &r;
    }
    for (auto& r : records) {
        r.eoc_L2.reset();
        r.eoc_H1.reset();
        if (r.n_cells_per_axis % 2 != 0) {
            continue;
        }
        const auto it = by_level.find({r.n_cells_per_axis / 2, r.alpha});
        if (it == by_level.end()) {
            continue;
        }
        const ConvergenceRecord& coarse = *it->second;
        if (coarse.err_L2_alpha > 0.0 && r.err_L2_alpha > 0.0) {
            r.eoc_L2 = std::log2(coarse.err_L2_alpha / r.err_L2_alpha);
        }
        if (coarse.err_H1semi_alpha > 0.0 && r.err_H1semi_alpha > 0.0) {
            r.eoc_H1 = std::log2(coarse.err_H1semi_alpha / r.err_H1semi_alpha);
        }
    }
}

std::string emit_table(const std::vector<ConvergenceRecord>& records, TableFormat format)
{
    require(!records.empty(), "cannot emit an empty table");
    std::string out;
    if (format == TableFormat::csv) {
        out += "dim,n_cells_per_axis,h,n_dofs,alpha,err_L2_alpha,err_H1semi_alpha,eoc_L2,eoc_H1\n";
        for (const auto& r : records) {
            out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.dim, r.n_cells_per_axis, format_real(r.h), r.n_dofs,
                               format_real(r.alpha), format_real(r.err_L2_alpha), format_real(r.err_H1semi_alpha),
                               format_optional(r.eoc_L2), format_optional(r.eoc_H1));
        }
        return out;
    }

    std::vector<double> alphas;
    for (const auto& r : records) {
        if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) {
            alphas.push_back(r.alpha);
        }
    }
    std::sort(alphas.begin(), alphas.end());
    auto rate = [](const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : std::string{"-"}; };
    for (const double alpha : alphas) {
        out += fmt::format("### {}D, alpha = {}\n\n", records.front().dim, alpha);
        out += "| n_c | h | dofs | L2_alpha error | rate | H1_alpha semi error | rate | H1_alpha error |\n";
        out += "|---:|---:|---:|---:|---:|---:|---:|---:|\n";
        std::vector<const ConvergenceRecord*> rows;
        for (const auto& r : records) {
            if (r.alpha == alpha) {
                rows.push_back(&r);
            }
        }
        std::sort(rows.begin(), rows.end(), [](auto* l, auto* r) { return l->h > r->h; });
        for (const auto* r : rows) {
            out += fmt::format("| {} | {:.4e} | {} | {:.4e} | {} | {:.4e} | {} | {:.4e} |\n", r->n_cells_per_axis, r->h,
                               r->n_dofs, r->err_L2_alpha, rate(r->eoc_L2), r->err_H1semi_alpha, rate(r->eoc_H1),
                               r->err_H1_alpha);
        }
        out += "\n";
    }
    return out;
}

std::vector<ConvergenceRecord> parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<ConvergenceRecord> records;
    if (!std::getline(in, line) || line.rfind("dim,", 0) != 0) {
        throw InvalidArgument("missing CSV header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        if (fields.size() != 9) {
            throw InvalidArgument("CSV row must have 9 fields: " + line);
        }
        auto opt = [](const std::string& s) -> std::optional<double> {
            return s.empty() ? std::nullopt : std::optional<double>(std::stod(s));
        };
        ConvergenceRecord r;
        r.dim = std::stoi(fields[0]);
        r.n_cells_per_axis = std::stoul(fields[1]);
        r.h = std::stod(fields[2]);
        r.n_dofs = std::stoul(fields[3]);
        r.alpha = std::stod(fields[4]);
        r.err_L2_alpha = std::stod(fields[5]);
        r.err_H1semi_alpha = std::stod(fields[6]);
        r.eoc_L2 = opt(fields[7]);
        r.eoc_H1 = opt(fields[8]);
        records.push_back(r);
    }
    return records;
}

std::optional<double> mean_final_eoc(const std::vector<ConvergenceRecord>& records, double alpha, bool h1,
                                     std::size_t count)
{
    std::vector<double> rates;
    for (const auto& r : records) {
        if (r.alpha != alpha) {
            continue;
        }
        const auto& e = h1 ? r.eoc_H1 : r.eoc_L2;
        if (e) {
            rates.push_back(*e);
        }
    }
    if (rates.empty()) {
        return std::nullopt;
    }
    const std::size_t n = std::min(count, rates.size());
    double sum = 0.0;
    for (std::size_t i = rates.size() - n; i < rates.size(); ++i) {
        sum += rates[i];
    }
    return sum / static_cast<double>(n);
}

} // namespace ifem
