#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "otmix/errors.hpp"
#include "otmix/fit.hpp"
#include "otmix/types.hpp"
#include "otmix/verify.hpp"

// Versioned text serialization for datasets, models, and reports. Numbers are
// written with 17 significant digits so every double round-trips exactly, and
// files are written whole via temp-then-rename. Comma-delimited, '.' decimal
// point, no locale involvement anywhere.

namespace otmix {
namespace io_detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

inline std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == delim) {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

inline double parse_double(const std::string& cell, int line, int column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": '" + cell + "' is not a number");
    return value;
}

inline long parse_int(const std::string& cell, int line, int column) {
    long value = 0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": '" + cell + "' is not an integer");
    return value;
}

inline const char* kModelMagic = "otmix-model";
inline const char* kFitReportMagic = "otmix-fit-report";
inline const char* kVerificationMagic = "otmix-verification-report";
inline const char* kSchemaVersion = "1";

// Splits "keyword rest..." on single spaces.
inline std::vector<std::string> tokens_of(const std::string& line) {
    return split_fields(line, ' ');
}

}  // namespace io_detail

// Comma-separated text with a header row; a column named exactly "label"
// carries 1-based integer class labels.
inline Dataset read_dataset(const std::filesystem::path& path) {
    const auto lines = io_detail::split_lines(io_detail::read_whole_file(path));
    if (lines.empty()) throw ParseError("line 1: missing header row");
    const auto header = io_detail::split_fields(lines[0], ',');
    int label_column = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "label") {
            if (label_column >= 0)
                throw ParseError("line 1: more than one 'label' column");
            label_column = static_cast<int>(c);
        }
    }
    const int width = static_cast<int>(header.size());
    const int d = width - (label_column >= 0 ? 1 : 0);
    if (d < 1) throw ParseError("line 1: no feature columns");

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break;
        const int line_no = static_cast<int>(li) + 1;
        const auto fields = io_detail::split_fields(lines[li], ',');
        if (static_cast<int>(fields.size()) != width)
            throw RaggedRow("line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(width));
        std::vector<double> row;
        row.reserve(d);
        for (int c = 0; c < width; ++c) {
            if (c == label_column) {
                labels.push_back(static_cast<int>(
                    io_detail::parse_int(fields[c], line_no, c + 1)));
            } else {
                row.push_back(io_detail::parse_double(fields[c], line_no, c + 1));
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("file has a header but no data rows");

    Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < d; ++c)
            points(static_cast<Eigen::Index>(i), c) = rows[i][static_cast<std::size_t>(c)];
    if (label_column >= 0) return Dataset(std::move(points), std::move(labels));
    return Dataset(std::move(points));
}

inline void write_dataset(const Dataset& data, const std::filesystem::path& path) {
    std::string out;
    for (Eigen::Index c = 0; c < data.dimension(); ++c) {
        if (c > 0) out += ',';
        out += "x" + std::to_string(c + 1);
    }
    if (data.labels()) out += ",label";
    out += '\n';
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        for (Eigen::Index c = 0; c < data.dimension(); ++c) {
            if (c > 0) out += ',';
            out += io_detail::format_double(data.points()(i, c));
        }
        if (data.labels())
            out += ',' + std::to_string((*data.labels())[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    io_detail::atomic_write(path, out);
}

inline void write_model(const GmmParams& params, const std::filesystem::path& path) {
    std::string out;
    out += io_detail::kModelMagic;
    out += '\n';
    out += "schema_version ";
    out += io_detail::kSchemaVersion;
    out += '\n';
    out += "components " + std::to_string(params.components()) + '\n';
    out += "dimension " + std::to_string(params.dimension()) + '\n';
    out += "weights";
    for (Eigen::Index j = 0; j < params.components(); ++j)
        out += ' ' + io_detail::format_double(params.weights()[j]);
    out += '\n';
    for (Eigen::Index j = 0; j < params.components(); ++j) {
        out += "mean " + std::to_string(j + 1);
        for (Eigen::Index c = 0; c < params.dimension(); ++c)
            out += ' ' + io_detail::format_double(params.means()(j, c));
        out += '\n';
    }
    for (Eigen::Index r = 0; r < params.dimension(); ++r) {
        out += "covariance_row " + std::to_string(r + 1);
        for (Eigen::Index c = 0; c < params.dimension(); ++c)
            out += ' ' + io_detail::format_double(params.covariance()(r, c));
        out += '\n';
    }
    io_detail::atomic_write(path, out);
}

inline GmmParams read_model(const std::filesystem::path& path) {
    const auto lines = io_detail::split_lines(io_detail::read_whole_file(path));
    auto expect_line = [&lines](std::size_t idx) -> const std::string& {
        if (idx >= lines.size())
            throw ParseError("line " + std::to_string(idx + 1) + ": unexpected end of file");
        return lines[idx];
    };
    if (expect_line(0) != io_detail::kModelMagic)
        throw ParseError("line 1: not a model document");
    {
        const auto t = io_detail::tokens_of(expect_line(1));
        if (t.size() != 2 || t[0] != "schema_version")
            throw ParseError("line 2: expected 'schema_version <v>'");
        if (t[1] != io_detail::kSchemaVersion)
            throw SchemaVersionMismatch("unsupported schema_version '" + t[1] + "'");
    }
    auto parse_count = [](const std::string& line, int line_no, const char* key) {
        const auto t = io_detail::tokens_of(line);
        if (t.size() != 2 || t[0] != key)
            throw ParseError("line " + std::to_string(line_no) + ": expected '" +
                             key + " <n>'");
        const long v = io_detail::parse_int(t[1], line_no, 2);
        if (v < 1)
            throw ParseError("line " + std::to_string(line_no) + ": " + key +
                             " must be at least 1");
        return static_cast<Eigen::Index>(v);
    };
    const Eigen::Index k = parse_count(expect_line(2), 3, "components");
    const Eigen::Index d = parse_count(expect_line(3), 4, "dimension");

    auto parse_values = [](const std::vector<std::string>& t, std::size_t from,
                           Eigen::Index count, int line_no) {
        if (static_cast<Eigen::Index>(t.size() - from) != count)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(count) + " values");
        Eigen::VectorXd v(count);
        for (Eigen::Index c = 0; c < count; ++c)
            v(c) = io_detail::parse_double(t[from + static_cast<std::size_t>(c)],
                                           line_no, static_cast<int>(from + c) + 1);
        return v;
    };

    std::size_t line_idx = 4;
    const auto weight_tokens = io_detail::tokens_of(expect_line(line_idx));
    if (weight_tokens.empty() || weight_tokens[0] != "weights")
        throw ParseError("line " + std::to_string(line_idx + 1) + ": expected 'weights ...'");
    const Eigen::VectorXd weights =
        parse_values(weight_tokens, 1, k, static_cast<int>(line_idx) + 1);
    ++line_idx;

    Eigen::MatrixXd means(k, d);
    for (Eigen::Index j = 0; j < k; ++j, ++line_idx) {
        const auto t = io_detail::tokens_of(expect_line(line_idx));
        const int line_no = static_cast<int>(line_idx) + 1;
        if (t.size() < 2 || t[0] != "mean" ||
            io_detail::parse_int(t[1], line_no, 2) != j + 1)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'mean " +
                             std::to_string(j + 1) + " ...'");
        means.row(j) = parse_values(t, 2, d, line_no).transpose();
    }
    Eigen::MatrixXd covariance(d, d);
    for (Eigen::Index r = 0; r < d; ++r, ++line_idx) {
        const auto t = io_detail::tokens_of(expect_line(line_idx));
        const int line_no = static_cast<int>(line_idx) + 1;
        if (t.size() < 2 || t[0] != "covariance_row" ||
            io_detail::parse_int(t[1], line_no, 2) != r + 1)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'covariance_row " + std::to_string(r + 1) + " ...'");
        covariance.row(r) = parse_values(t, 2, d, line_no).transpose();
    }

    try {
        return GmmParams(std::move(means), std::move(covariance),
                         ProbabilityVector(weights));
    } catch (const Error& e) {
        throw InvariantViolation("model document violates parameter invariants: " +
                                 std::string(e.what()));
    }
}

inline void write_fit_report(const FitReport& report, const std::filesystem::path& path) {
    std::string out;
    out += io_detail::kFitReportMagic;
    out += '\n';
    out += "schema_version ";
    out += io_detail::kSchemaVersion;
    out += '\n';
    out += "sweeps_used " + std::to_string(report.sweeps_used) + '\n';
    out += std::string("converged ") + (report.converged ? "true" : "false") + '\n';
    out += std::string("termination_reason ") + to_string(report.termination_reason) + '\n';
    for (std::size_t s = 0; s < report.nll_trajectory.size(); ++s) {
        out += "sweep " + std::to_string(s + 1);
        out += " nll " + io_detail::format_double(report.nll_trajectory[s]);
        out += " eot " + io_detail::format_double(report.eot_value_trajectory[s]);
        out += '\n';
    }
    io_detail::atomic_write(path, out);
}

inline void write_verification_report(const VerificationReport& report,
                                      const std::filesystem::path& path) {
    std::string out;
    out += io_detail::kVerificationMagic;
    out += '\n';
    out += "schema_version ";
    out += io_detail::kSchemaVersion;
    out += '\n';
    out += "seed " + std::to_string(report.seed) + '\n';
    out += "trials " + std::to_string(report.trials) + '\n';
    for (const auto& check : report.checks) {
        out += "check " + check.name;
        out += " instances " + std::to_string(check.instances_run);
        out += " max_residual " + io_detail::format_double(check.max_residual);
        out += " tolerance " + io_detail::format_double(check.tolerance);
        out += std::string(" passed ") + (check.passed ? "true" : "false");
        out += '\n';
    }
    out += std::string("overall_passed ") + (report.all_passed() ? "true" : "false") + '\n';
    io_detail::atomic_write(path, out);
}

}  // namespace otmix
