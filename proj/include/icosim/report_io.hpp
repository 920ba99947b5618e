#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "icosim/training.hpp"

namespace icosim {

/// "%.17g" — round-trips IEEE doubles exactly; used by every numeric output
/// file.
std::string format_full(double v);

// TrainReport persistence:
//   report_<pipeline>.json          config echo, seeds, final losses, curves
//   curves_<pipeline>.csv           epoch,trial,train_loss,test_loss
//   params_<pipeline>_trial<t>.txt  one parameter per line
void write_report_json(const std::filesystem::path& path, const TrainReport& report);
TrainReport read_report_json(const std::filesystem::path& path);

void write_curves_csv(const std::filesystem::path& path, const TrainReport& report,
                      bool cumulative = false);

void write_params_txt(const std::filesystem::path& path, std::span<const double> params);
std::vector<double> read_params_txt(const std::filesystem::path& path);

struct CompareResult {
    int epochs = 0;
    double threshold = 0.0;
    // mean curves, a = ico slot, b = definite slot of the emitted file
    std::vector<double> a_train, a_test, b_train, b_test;
    // first epoch (1-based) whose mean train loss drops below threshold;
    // -1 when never reached
    int a_epochs_to_threshold = -1;
    int b_epochs_to_threshold = -1;
    std::string a_label, b_label;
};

/// Aligns the two reports' mean curves and computes epochs-to-threshold.
/// ConfigError when the runs' shapes (epochs, layers, qubits, loss) differ.
CompareResult compare_reports(const TrainReport& a, const TrainReport& b, double threshold);

/// Header `epoch,ico_train,ico_test,def_train,def_test`.
void write_compare_csv(const std::filesystem::path& path, const CompareResult& cmp);

} // namespace icosim
