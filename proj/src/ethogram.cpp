#include "ethopipe/ethogram.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ethopipe/errors.hpp"

namespace ethopipe {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("ethogram line " + std::to_string(line_no) +
                              ": cannot parse number '" + s + "'");
    }
}

}  // namespace

std::vector<EthogramInterval> parse_ethogram_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"start_s", "end_s", "label"})
        throw ValidationError("ethogram: expected header 'start_s,end_s,label'");

    std::vector<EthogramInterval> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw ValidationError("ethogram line " + std::to_string(line_no) +
                                  ": expected 3 columns");
        EthogramInterval iv;
        iv.start_s = parse_double(cells[0], line_no);
        iv.end_s = parse_double(cells[1], line_no);
        iv.label = cells[2];
        if (iv.label.empty())
            throw ValidationError("ethogram line " + std::to_string(line_no) + ": empty label");
        if (!(iv.end_s > iv.start_s) || iv.start_s < 0)
            throw ValidationError("ethogram line " + std::to_string(line_no) +
                                  ": requires end_s > start_s >= 0");
        out.push_back(std::move(iv));
    }
    return out;
}

std::vector<EthogramInterval> read_ethogram_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open ethogram: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ethogram_csv(ss.str());
}

std::string serialize_ethogram_csv(const std::vector<EthogramInterval>& intervals) {
    std::string out = "start_s,end_s,label\n";
    char buf[128];
    for (const auto& iv : intervals) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,", iv.start_s, iv.end_s);
        out += buf;
        out += iv.label;
        out += '\n';
    }
    return out;
}

void write_ethogram_csv(const std::vector<EthogramInterval>& intervals, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write ethogram: " + path);
    out << serialize_ethogram_csv(intervals);
    if (!out) throw IoError("write failed: " + path);
}

void check_no_overlap_per_label(const std::vector<EthogramInterval>& intervals) {
    std::map<std::string, std::vector<std::pair<double, double>>> by_label;
    for (const auto& iv : intervals) by_label[iv.label].push_back({iv.start_s, iv.end_s});
    for (auto& [label, spans] : by_label) {
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i)
            if (spans[i].first < spans[i - 1].second)
                throw ValidationError("overlapping intervals for label '" + label + "'");
    }
}

}  // namespace ethopipe
