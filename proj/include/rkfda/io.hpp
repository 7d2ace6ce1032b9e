#pragma once

#include "rkfda/bench.hpp"
#include "rkfda/classify.hpp"

#include <iosfwd>
#include <string>

namespace rkfda {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Dataset CSV: header "label,t_<time>,...", then one "label,v1,...,vG" row per curve.
void write_dataset(std::ostream& out, const LabeledDataset& dataset);
void write_dataset_file(const std::string& path, const LabeledDataset& dataset);
LabeledDataset read_dataset(std::istream& in, PriorMode prior = PriorMode::fixed(0.5));
LabeledDataset read_dataset_file(const std::string& path, PriorMode prior = PriorMode::fixed(0.5));

/// "rank,t,psi" rows.
void write_selection(std::ostream& out, const SelectionResult& selection);

/// "model,n,method,runs,mean_accuracy,sd_accuracy,mean_d,failed_runs".
void write_report(std::ostream& out, const RunReport& report);

/// "t,count" rows.
void write_histogram(std::ostream& out, const Grid& grid, const std::vector<std::size_t>& counts);

// Model files are plain text; line 1 is the format tag.
inline constexpr const char* kModelFormatTag = "rkfda-model v1";
void write_classifier(std::ostream& out, const TrainedClassifier& classifier);
TrainedClassifier read_classifier(std::istream& in);

}  // namespace rkfda
