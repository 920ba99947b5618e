#include "icosim/report_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace icosim {

using nlohmann::json;

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json config_to_json(const TrainConfig& c) {
    return json{
        {"pipeline", pipeline_name(c.pipeline)},
        {"n_layers", c.n_layers},
        {"n_qubits", c.n_qubits},
        {"epochs", c.epochs},
        {"learning_rate", c.learning_rate},
        {"batch_size", c.batch_size},
        {"n_trials", c.n_trials},
        {"loss_kind", loss_kind_name(c.loss_kind)},
        {"seed", c.seed},
        {"init_scheme", "uniform_pi"},
        {"order_init", c.order_init == OrderInit::plus ? "plus" : "zero"},
    };
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.pipeline = pipeline_from_name(j.at("pipeline").get<std::string>());
    c.n_layers = j.at("n_layers").get<int>();
    c.n_qubits = j.at("n_qubits").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.n_trials = j.at("n_trials").get<int>();
    c.loss_kind = loss_kind_from_name(j.at("loss_kind").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.order_init =
        j.at("order_init").get<std::string>() == "zero" ? OrderInit::zero : OrderInit::plus;
    return c;
}

} // namespace

void write_report_json(const std::filesystem::path& path, const TrainReport& report) {
    json j;
    j["config"] = config_to_json(report.config);
    j["dataset_seed"] = report.dataset_seed;
    // Losses are in normalized target units (heading / 360); multiply by this
    // factor to read them on the degree scale.
    j["loss_units"] = json{
        {"space", "normalized_heading"},
        {"to_degree_scale_factor",
         report.config.loss_kind == LossKind::mse ? 360.0 * 360.0 : 360.0},
    };
    j["wall_clock_seconds"] = report.wall_clock_seconds;
    j["mean_train_curve"] = report.mean_train_curve;
    j["mean_test_curve"] = report.mean_test_curve;
    json trials = json::array();
    for (const TrialResult& t : report.trials) {
        json jt;
        jt["seed"] = t.seed;
        jt["aborted"] = t.aborted;
        if (t.aborted) {
            jt["abort_epoch"] = t.abort_epoch;
            jt["abort_reason"] = t.abort_reason;
        }
        jt["train_curve"] = t.train_curve;
        jt["test_curve"] = t.test_curve;
        jt["final_train_loss"] = t.train_curve.empty() ? json() : json(t.train_curve.back());
        jt["final_test_loss"] = t.test_curve.empty() ? json() : json(t.test_curve.back());
        jt["final_params"] = t.final_params;
        trials.push_back(std::move(jt));
    }
    j["trials"] = std::move(trials);

    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

TrainReport read_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        json j;
        in >> j;
        TrainReport report;
        report.config = config_from_json(j.at("config"));
        report.dataset_seed = j.at("dataset_seed").get<std::uint64_t>();
        report.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        report.mean_train_curve = j.at("mean_train_curve").get<std::vector<double>>();
        report.mean_test_curve = j.at("mean_test_curve").get<std::vector<double>>();
        for (const json& jt : j.at("trials")) {
            TrialResult t;
            t.seed = jt.at("seed").get<std::uint64_t>();
            t.aborted = jt.at("aborted").get<bool>();
            if (t.aborted) {
                t.abort_epoch = jt.value("abort_epoch", -1);
                t.abort_reason = jt.value("abort_reason", std::string());
            }
            t.train_curve = jt.at("train_curve").get<std::vector<double>>();
            t.test_curve = jt.at("test_curve").get<std::vector<double>>();
            t.final_params = jt.at("final_params").get<std::vector<double>>();
            report.trials.push_back(std::move(t));
        }
        return report;
    } catch (const json::exception& e) {
        throw IoError("bad report file " + path.string() + ": " + e.what());
    }
}

void write_curves_csv(const std::filesystem::path& path, const TrainReport& report,
                      bool cumulative) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "epoch,trial,train_loss,test_loss\n";
    for (std::size_t trial = 0; trial < report.trials.size(); ++trial) {
        const TrialResult& t = report.trials[trial];
        double acc_train = 0.0;
        double acc_test = 0.0;
        for (std::size_t e = 0; e < t.train_curve.size(); ++e) {
            acc_train += t.train_curve[e];
            acc_test += t.test_curve[e];
            const double tr = cumulative ? acc_train : t.train_curve[e];
            const double te = cumulative ? acc_test : t.test_curve[e];
            out << (e + 1) << ',' << trial << ',' << format_full(tr) << ','
                << format_full(te) << '\n';
        }
    }
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

void write_params_txt(const std::filesystem::path& path, std::span<const double> params) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    for (double p : params) {
        out << format_full(p) << '\n';
    }
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

std::vector<double> read_params_txt(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<double> params;
    double v = 0.0;
    while (in >> v) {
        params.push_back(v);
    }
    if (params.empty()) {
        throw IoError("no parameters in " + path.string());
    }
    return params;
}

CompareResult compare_reports(const TrainReport& a, const TrainReport& b, double threshold) {
    const TrainConfig& ca = a.config;
    const TrainConfig& cb = b.config;
    if (ca.epochs != cb.epochs || ca.n_layers != cb.n_layers ||
        ca.n_qubits != cb.n_qubits || ca.loss_kind != cb.loss_kind ||
        ca.batch_size != cb.batch_size || ca.learning_rate != cb.learning_rate) {
        throw ConfigError("reports were produced with mismatched configurations");
    }
    if (a.mean_train_curve.empty() || b.mean_train_curve.empty()) {
        throw ConfigError("reports carry no completed trials to compare");
    }
    CompareResult cmp;
    cmp.epochs = ca.epochs;
    cmp.threshold = threshold;
    cmp.a_label = pipeline_name(ca.pipeline);
    cmp.b_label = pipeline_name(cb.pipeline);
    cmp.a_train = a.mean_train_curve;
    cmp.a_test = a.mean_test_curve;
    cmp.b_train = b.mean_train_curve;
    cmp.b_test = b.mean_test_curve;
    auto first_below = [threshold](const std::vector<double>& curve) {
        for (std::size_t e = 0; e < curve.size(); ++e) {
            if (curve[e] < threshold) {
                return static_cast<int>(e) + 1;
            }
        }
        return -1;
    };
    cmp.a_epochs_to_threshold = first_below(cmp.a_train);
    cmp.b_epochs_to_threshold = first_below(cmp.b_train);
    return cmp;
}

void write_compare_csv(const std::filesystem::path& path, const CompareResult& cmp) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "epoch,ico_train,ico_test,def_train,def_test\n";
    for (int e = 0; e < cmp.epochs; ++e) {
        const std::size_t i = static_cast<std::size_t>(e);
        out << (e + 1) << ',' << format_full(cmp.a_train[i]) << ','
            << format_full(cmp.a_test[i]) << ',' << format_full(cmp.b_train[i]) << ','
            << format_full(cmp.b_test[i]) << '\n';
    }
    if (!out) {
        throw IoError("write failed on " + path.string());
    }
}

} // namespace icosim
