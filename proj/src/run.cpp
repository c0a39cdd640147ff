#include "qng/run.hpp"

#include "qng/noisy_photon.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qng::cli {

namespace {

// One whitespace-delimited token with its 1-based source position.
struct Token {
    std::string text;
    int line = 1;
    int column = 1;
};

double parse_double_at(const std::string& text, int line, int column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw parse_error("expected a number, got '" + text + "'", line, column);
    }
    return value;
}

int parse_int_at(const std::string& text, int line, int column) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw parse_error("expected an integer, got '" + text + "'", line, column);
    }
    return value;
}

// Payload form RE[,IM], columns relative to `column` = position of RE.
Complex parse_complex_at(const std::string& text, int line, int column) {
    const size_t comma = text.find(',');
    if (comma == std::string::npos) {
        return Complex(parse_double_at(text, line, column), 0.0);
    }
    const double re = parse_double_at(text.substr(0, comma), line, column);
    const double im =
        parse_double_at(text.substr(comma + 1), line, column + static_cast<int>(comma) + 1);
    return Complex(re, im);
}

}  // namespace

void RunConfig::validate() const {
    if (truncation < 8) {
        throw std::invalid_argument("truncation must be at least 8");
    }
    if (grid_points < 10) {
        throw std::invalid_argument("grid_points must be at least 10");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    if (output_format != "csv" && output_format != "json") {
        throw std::invalid_argument("output format must be 'csv' or 'json'");
    }
}

parse_error::parse_error(const std::string& message, int line, int column)
    : std::runtime_error(message + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line_(line),
      column_(column) {}

DensityOperator parse_state_spec(const std::string& spec, int truncation) {
    const size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const bool has_payload = colon != std::string::npos;
    const std::string payload = has_payload ? spec.substr(colon + 1) : std::string();
    const int payload_col = has_payload ? static_cast<int>(colon) + 2 : 1;

    if (head == "vacuum") {
        if (has_payload) {
            throw parse_error("'vacuum' takes no parameters", 1, payload_col);
        }
        return states::vacuum(truncation);
    }
    if (!has_payload || payload.empty()) {
        throw parse_error("state '" + head + "' needs a ':<parameters>' part", 1,
                          static_cast<int>(spec.size()) + 1);
    }
    if (head == "fock") {
        const int n = parse_int_at(payload, 1, payload_col);
        if (n < 0) throw parse_error("Fock index must be non-negative", 1, payload_col);
        return states::fock(n, truncation);
    }
    if (head == "coherent") {
        return states::coherent(parse_complex_at(payload, 1, payload_col), truncation);
    }
    if (head == "thermal") {
        const double nbar = parse_double_at(payload, 1, payload_col);
        if (nbar < 0.0) {
            throw parse_error("thermal occupation must be non-negative", 1, payload_col);
        }
        return states::thermal(nbar, truncation);
    }
    if (head == "family") {
        NoisyPhotonParams params;
        bool have_p = false;
        int col = payload_col;
        std::stringstream ss(payload);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const size_t eq = item.find('=');
            if (eq == std::string::npos) {
                throw parse_error("expected key=value, got '" + item + "'", 1, col);
            }
            const std::string key = item.substr(0, eq);
            const int value_col = col + static_cast<int>(eq) + 1;
            const double value = parse_double_at(item.substr(eq + 1), 1, value_col);
            if (key == "p") {
                params.p = value;
                have_p = true;
            } else if (key == "r") {
                params.r = value;
            } else if (key == "theta") {
                params.theta = value;
            } else {
                throw parse_error("unknown family parameter '" + key + "'", 1, col);
            }
            col += static_cast<int>(item.size()) + 1;
        }
        if (!have_p) {
            throw parse_error("family state needs p=<fraction>", 1, payload_col);
        }
        try {
            return density(params, truncation);
        } catch (const std::invalid_argument& err) {
            throw parse_error(err.what(), 1, payload_col);
        }
    }
    if (head == "file") {
        if (!std::ifstream(payload)) {
            throw parse_error("cannot open matrix file '" + payload + "'", 1, payload_col);
        }
        DensityOperator rho = read_matrix_file(payload);
        if (rho.dim() >= truncation) return rho;
        // Embed small matrices in the working dimension so that moment sums
        // see the same state with honest headroom at the top of the space.
        Matrix padded = Matrix::Zero(truncation, truncation);
        padded.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
        return DensityOperator(std::move(padded));
    }
    throw parse_error("unknown state kind '" + head + "'", 1, 1);
}

DensityOperator read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open matrix file '" + path + "'");
    }
    std::vector<Token> tokens;
    std::string line_text;
    int line_no = 0;
    while (std::getline(in, line_text)) {
        ++line_no;
        size_t pos = 0;
        while (pos < line_text.size()) {
            while (pos < line_text.size() && std::isspace(static_cast<unsigned char>(line_text[pos]))) {
                ++pos;
            }
            if (pos >= line_text.size()) break;
            const size_t start = pos;
            while (pos < line_text.size() &&
                   !std::isspace(static_cast<unsigned char>(line_text[pos]))) {
                ++pos;
            }
            tokens.push_back({line_text.substr(start, pos - start), line_no,
                              static_cast<int>(start) + 1});
        }
    }
    if (tokens.empty()) {
        throw parse_error("matrix file '" + path + "' is empty", 1, 1);
    }
    const int dim = parse_int_at(tokens[0].text, tokens[0].line, tokens[0].column);
    if (dim < 1 || dim > 4096) {
        throw parse_error("matrix dimension must be in [1, 4096]", tokens[0].line,
                          tokens[0].column);
    }
    const size_t needed = 1 + 2 * static_cast<size_t>(dim) * static_cast<size_t>(dim);
    if (tokens.size() < needed) {
        const Token& last = tokens.back();
        throw parse_error("matrix file ends early: expected " + std::to_string(needed - 1) +
                              " numbers after the dimension, found " +
                              std::to_string(tokens.size() - 1),
                          last.line, last.column);
    }
    if (tokens.size() > needed) {
        const Token& extra = tokens[needed];
        throw parse_error("unexpected trailing content '" + extra.text + "'", extra.line,
                          extra.column);
    }
    Matrix m(dim, dim);
    size_t next = 1;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const Token& re_tok = tokens[next++];
            const Token& im_tok = tokens[next++];
            m(i, j) = Complex(parse_double_at(re_tok.text, re_tok.line, re_tok.column),
                              parse_double_at(im_tok.text, im_tok.line, im_tok.column));
        }
    }
    return DensityOperator(std::move(m));
}

std::vector<Fig1Row> fig1_rows(int grid_points, const EnvelopeSolution& env) {
    std::vector<Fig1Row> rows;
    rows.reserve(static_cast<size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        const double p = static_cast<double>(i) / (grid_points - 1);
        const MinimizationResult res = minimize_over_r(p);
        rows.push_back({p, res.m_value, res.r_opt, qng_noisy_photon(p, env)});
    }
    return rows;
}

std::string format_sig9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

void write_fig1_csv(std::ostream& os, const std::vector<Fig1Row>& rows) {
    os << "p,M,r_opt,QNG\n";
    for (const Fig1Row& row : rows) {
        os << format_sig9(row.p) << ',' << format_sig9(row.m) << ',' << format_sig9(row.r_opt)
           << ',' << format_sig9(row.qng) << '\n';
    }
}

void write_fig1_json(std::ostream& os, const RunConfig& config,
                     const std::vector<Fig1Row>& rows, const EnvelopeSolution& env) {
    nlohmann::json doc;
    doc["config"] = {{"truncation", config.truncation},
                     {"tolerance", config.tolerance},
                     {"grid_points", config.grid_points},
                     {"output_format", config.output_format},
                     {"output_path", config.output_path}};
    doc["envelope"] = {{"p1", env.p1}, {"p2", env.p2}, {"slope", env.slope}};
    nlohmann::json json_rows = nlohmann::json::array();
    for (const Fig1Row& row : rows) {
        json_rows.push_back(
            {{"p", row.p}, {"M", row.m}, {"r_opt", row.r_opt}, {"QNG", row.qng}});
    }
    doc["rows"] = std::move(json_rows);
    os << doc.dump(2) << '\n';
}

}  // namespace qng::cli
