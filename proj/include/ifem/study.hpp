#pragma once

#include "ifem/common.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ifem {

enum class TableFormat { csv, markdown };

/// Parameters of a convergence study on the model interface problem.
struct StudyConfig {
    int dim = 2;
    int min_exp = 3; // coarsest level has 2^min_exp cells per axis
    int max_exp = 8;
    std::vector<double> alphas{0.0, 0.1, 0.2, 0.3, 0.4, 0.49};
    int degree = 1;
    std::optional<double> sigma;          // default sqrt(dim)
    double cg_tol = 1e-10;
    std::size_t quad_points = 0;          // error quadrature per axis; 0 selects degree + 3
    std::optional<int> cut_depth;         // default 6 in 2D, 4 in 3D
    std::vector<double> center;           // default (0.3, ..., 0.3)
    double radius = 0.2;
    int interface_order = 4;
    bool allow_large_3d = false;
};

/// Bisection depth used for error integration on cut cells.
int default_cut_depth(int dim);

/// Throws InvalidArgument when the configuration is unusable.
void validate(const StudyConfig& config);

/// One (level, alpha) row of a convergence table.
struct ConvergenceRecord {
    int dim = 2;
    std::size_t n_cells_per_axis = 0;
    double h = 0.0;
    std::size_t n_dofs = 0;
    double alpha = 0.0;
    double err_L2_alpha = 0.0;
    double err_H1semi_alpha = 0.0;
    double err_H1_alpha = 0.0; // full norm, reported alongside the seminorm
    std::optional<double> eoc_L2;
    std::optional<double> eoc_H1;
};

/// Thrown when CG fails on some level.
class SolverFailure : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// Solves the model problem on every level and evaluates weighted errors.
/// Records are sorted by (n_cells_per_axis, alpha). Progress lines go to `log` when given.
std::vector<ConvergenceRecord> run_study(const StudyConfig& config, std::ostream* log = nullptr);

/// Fills eoc_L2/eoc_H1 from the record at the same alpha on the next coarser level.
void attach_eoc(std::vector<ConvergenceRecord>& records);

std::string emit_table(const std::vector<ConvergenceRecord>& records, TableFormat format);

/// Parses the CSV produced by emit_table(records, TableFormat::csv).
std::vector<ConvergenceRecord> parse_csv(const std::string& text);

/// Mean of the last `count` EOC values for one alpha (fewer if not available).
std::optional<double> mean_final_eoc(const std::vector<ConvergenceRecord>& records, double alpha, bool h1,
                                     std::size_t count = 3);

} // namespace ifem
