#pragma once

#include <string>
#include <vector>

namespace ethopipe {

/// One labelled ground-truth or predicted behaviour bout, seconds from
/// video start, end exclusive.
struct EthogramInterval {
    std::string label;
    double start_s = 0;
    double end_s = 0;

    bool operator==(const EthogramInterval&) const = default;
};

/// CSV with header `start_s,end_s,label`. Seconds are written with six
/// decimals; write -> read -> write is byte-identical.
std::vector<EthogramInterval> read_ethogram_csv(const std::string& path);
std::vector<EthogramInterval> parse_ethogram_csv(const std::string& text);
void write_ethogram_csv(const std::vector<EthogramInterval>& intervals, const std::string& path);
std::string serialize_ethogram_csv(const std::vector<EthogramInterval>& intervals);

/// Throws when two intervals of the same label overlap.
void check_no_overlap_per_label(const std::vector<EthogramInterval>& intervals);

}  // namespace ethopipe
