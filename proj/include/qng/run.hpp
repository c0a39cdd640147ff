#pragma once

#include "qng/convex_roof.hpp"
#include "qng/fock.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

// Reusable pieces behind the command-line tool: run configuration, the state
// specification mini-grammar, matrix-file input, sweep rows, and the CSV/JSON
// writers. Kept in the library so they are unit-testable without spawning
// processes.

namespace qng::cli {

// Process exit statuses shared by all subcommands.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;       // bad flags, unparsable specs/files
inline constexpr int kExitViolation = 2;   // a property check failed
inline constexpr int kExitNumerical = 3;   // no convergence / truncation-unsafe

struct RunConfig {
    int truncation = 30;
    double tolerance = 1e-9;
    int grid_points = 1000;
    std::string output_path;            // empty means stdout
    std::string output_format = "csv";  // "csv" or "json"

    // Throws std::invalid_argument on out-of-range values
    // (truncation >= 8, grid_points >= 10, known format).
    void validate() const;
};

// Input error with a 1-based source position. For inline state specifications
// the line is always 1 and the column indexes into the specification string.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& message, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Builds the state described by `spec` in a space of dimension `truncation`.
// Grammar:
//   vacuum | fock:N | coherent:RE[,IM] | thermal:NBAR
//   | family:p=..[,r=..][,theta=..] | file:PATH
// Matrix files smaller than the truncation are zero-padded up to it; larger
// ones keep their own dimension.
DensityOperator parse_state_spec(const std::string& spec, int truncation);

// Plain-text matrix file: first line the dimension d, then d*d complex
// entries in row-major order as whitespace-separated "re im" pairs.
DensityOperator read_matrix_file(const std::string& path);

struct Fig1Row {
    double p = 0.0;
    double m = 0.0;      // M(p)
    double r_opt = 0.0;
    double qng = 0.0;    // lower convex envelope value
};

// (p, M, r_opt, QNG) on a uniform grid over [0, 1], ascending in p.
std::vector<Fig1Row> fig1_rows(int grid_points, const EnvelopeSolution& env);

// Number formatted to 9 significant digits (CSV and printed summaries).
std::string format_sig9(double value);

void write_fig1_csv(std::ostream& os, const std::vector<Fig1Row>& rows);

// JSON document with `config`, `rows`, and `envelope {p1, p2, slope}`;
// numbers are emitted at full round-trip precision.
void write_fig1_json(std::ostream& os, const RunConfig& config,
                     const std::vector<Fig1Row>& rows, const EnvelopeSolution& env);

}  // namespace qng::cli
