#include "detsgrad/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "detsgrad/errors.hpp"

namespace detsgrad {

namespace {

void append_double(std::string& line, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    line.append(buf, len);
}

double parse_double(const std::string& field, long row) {
    double v = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ArtifactError("bad numeric field \"" + field + "\" in CSV row " + std::to_string(row), row);
    return v;
}

long parse_long(const std::string& field, long row) {
    long v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw ArtifactError("bad integer field \"" + field + "\" in CSV row " + std::to_string(row), row);
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_metrics_csv(const RunMetrics& metrics, std::ostream& out) {
    std::string line = "k,consensus_error,empirical_risk,avg_grad_norm,lyapunov,increment_sq";
    for (int i = 0; i < metrics.n_agents; ++i) line += ",bcast_" + std::to_string(i);
    line += "\n";
    out << line;

    for (const auto& row : metrics.rows) {
        line.clear();
        line += std::to_string(row.k);
        line += ',';
        append_double(line, row.consensus_error);
        line += ',';
        append_double(line, row.empirical_risk);
        line += ',';
        append_double(line, row.avg_grad_norm);
        line += ',';
        append_double(line, row.lyapunov);
        line += ',';
        append_double(line, row.increment_sq);
        for (const long b : row.broadcast_cum) {
            line += ',';
            line += std::to_string(b);
        }
        line += "\n";
        out << line;
    }
}

RunMetrics read_metrics_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ArtifactError("empty metrics CSV", 1);
    const auto header = split_csv(line);
    constexpr int kFixed = 6;
    if (header.size() < kFixed || header[0] != "k")
        throw ArtifactError("unrecognized metrics CSV header", 1);

    RunMetrics metrics;
    metrics.n_agents = static_cast<int>(header.size()) - kFixed;

    long row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw ArtifactError("CSV row " + std::to_string(row_no) + " has " +
                                    std::to_string(fields.size()) + " fields, expected " +
                                    std::to_string(header.size()),
                                row_no);
        MetricsRow row;
        row.k = parse_long(fields[0], row_no);
        row.consensus_error = parse_double(fields[1], row_no);
        row.empirical_risk = parse_double(fields[2], row_no);
        row.avg_grad_norm = parse_double(fields[3], row_no);
        row.lyapunov = parse_double(fields[4], row_no);
        row.increment_sq = parse_double(fields[5], row_no);
        row.broadcast_cum.reserve(metrics.n_agents);
        for (int i = 0; i < metrics.n_agents; ++i)
            row.broadcast_cum.push_back(parse_long(fields[kFixed + i], row_no));
        metrics.rows.push_back(std::move(row));
    }
    if (!metrics.rows.empty()) {
        metrics.final_broadcasts = metrics.rows.back().broadcast_cum;
        metrics.iterations = metrics.rows.back().k + 1;
    }
    return metrics;
}

BroadcastAccounting broadcast_accounting(const RunMetrics& metrics) {
    BroadcastAccounting acc;
    acc.totals = metrics.final_broadcasts;
    acc.iterations = metrics.iterations;
    if (metrics.n_agents > 0 && metrics.iterations > 0) {
        double total = 0.0;
        for (const long t : acc.totals) total += static_cast<double>(t);
        acc.reduction_pct = 100.0 * (1.0 - total / (static_cast<double>(metrics.n_agents) *
                                                    static_cast<double>(metrics.iterations)));
    }
    return acc;
}

double reduction_percent(double avg_broadcasts, double iterations) {
    return 100.0 * (1.0 - avg_broadcasts / iterations);
}

}  // namespace detsgrad
