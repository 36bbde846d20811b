#include "heartml/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <thread>

#include "heartml/error.hpp"
#include "heartml/rng.hpp"

namespace heartml {

namespace {

[[noreturn]] void tuning_error(const std::string& msg, ErrorKind kind = ErrorKind::Config) {
    throw Error(Stage::Tuning, kind, msg);
}

const ParamValue& find_param(const Candidate& params, const std::string& name) {
    for (const auto& [key, value] : params) {
        if (key == name) return value;
    }
    tuning_error("missing parameter \"" + name + "\"");
}

struct FoldData {
    Dataset train;
    Dataset held_out;
};

// Fold-wise preprocessing is a pure function of the fold rows, so it can
// be fitted once and shared by every candidate.
std::vector<FoldData> prepare_folds(const Dataset& dataset, const CvConfig& cv) {
    const FoldPlan plan = stratified_kfold(dataset.target, cv.k, cv.seed);
    std::vector<FoldData> folds;
    folds.reserve(cv.k);
    for (std::size_t fold = 0; fold < cv.k; ++fold) {
        const Dataset train = dataset.subset(plan.complement_rows(fold));
        const Dataset held_out = dataset.subset(plan.fold_rows(fold));
        const PipelineParams pipeline = fit_pipeline(train);
        folds.push_back(
            {apply_pipeline(pipeline, train), apply_pipeline(pipeline, held_out)});
    }
    return folds;
}

void finish_candidate(CandidateResult& slot) {
    double mean = 0.0;
    for (double s : slot.fold_scores) mean += s;
    mean /= static_cast<double>(slot.fold_scores.size());
    double var = 0.0;
    for (double s : slot.fold_scores) var += (s - mean) * (s - mean);
    slot.mean_score = mean;
    slot.std_score = std::sqrt(var / static_cast<double>(slot.fold_scores.size()));
}

SearchResult run_search(const ModelFamilyOps& family, std::vector<Candidate> candidates,
                        const Dataset& dataset, const CvConfig& cv, std::size_t threads) {
    if (candidates.empty()) {
        tuning_error("no candidates to evaluate");
    }

    SearchResult result;
    result.candidates.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        result.candidates[i].params = candidates[i];
        // Surface malformed candidates (unknown names, bad values) before
        // any evaluation work starts.
        (void)family.make(candidates[i]);
    }

    const std::vector<FoldData> folds = prepare_folds(dataset, cv);

    // A job is one candidate or one shared group; jobs are independent and
    // write to disjoint enumeration-indexed slots, so completion order
    // cannot affect the results.
    std::vector<std::vector<std::size_t>> jobs;
    {
        std::vector<std::pair<std::string, std::size_t>> keyed;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const std::string key = family.group_key(candidates[i]);
            if (key.empty()) {
                jobs.push_back({i});
            } else {
                keyed.emplace_back(key, i);
            }
        }
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < keyed.size();) {
            std::vector<std::size_t> group;
            const std::string& key = keyed[i].first;
            for (; i < keyed.size() && keyed[i].first == key; ++i) {
                group.push_back(keyed[i].second);
            }
            jobs.push_back(std::move(group));
        }
    }

    auto run_job = [&](const std::vector<std::size_t>& members) {
        if (members.size() == 1) {
            CandidateResult& slot = result.candidates[members[0]];
            slot.fold_scores.reserve(folds.size());
            for (const FoldData& fold : folds) {
                auto model = family.make(slot.params);
                model->fit(fold.train.features, fold.train.target);
                slot.fold_scores.push_back(
                    score_accuracy(*model, fold.held_out.features, fold.held_out.target));
            }
            finish_candidate(slot);
            return;
        }
        std::vector<Candidate> group;
        group.reserve(members.size());
        for (std::size_t i : members) group.push_back(candidates[i]);
        for (const FoldData& fold : folds) {
            const std::vector<double> scores =
                family.score_group(group, fold.train.features, fold.train.target,
                                   fold.held_out.features, fold.held_out.target);
            if (scores.size() != members.size()) {
                tuning_error("family group scoring returned a wrong-sized result");
            }
            for (std::size_t g = 0; g < members.size(); ++g) {
                result.candidates[members[g]].fold_scores.push_back(scores[g]);
            }
        }
        for (std::size_t i : members) finish_candidate(result.candidates[i]);
    };

    if (threads <= 1 || jobs.size() == 1) {
        for (const auto& job : jobs) run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        const std::size_t workers = std::min(threads, jobs.size());
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= jobs.size()) return;
                        run_job(jobs[i]);
                    }
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    result.best_index = 0;
    for (std::size_t i = 1; i < result.candidates.size(); ++i) {
        if (result.candidates[i].mean_score > result.candidates[result.best_index].mean_score) {
            result.best_index = i;
        }
    }
    result.best_params = result.candidates[result.best_index].params;

    // Refit the winner on the full provided training set.
    result.best_pipeline = fit_pipeline(dataset);
    const Dataset transformed = apply_pipeline(result.best_pipeline, dataset);
    auto model = family.make(result.best_params);
    model->fit(transformed.features, transformed.target);
    result.best_model = std::move(model);
    return result;
}

}  // namespace

std::string param_value_to_string(const ParamValue& value) {
    if (std::holds_alternative<std::monostate>(value)) return "null";
    if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::get<double>(value));
    (void)ec;
    return std::string(buf, ptr);
}

std::vector<Candidate> expand_grid(const ParamGrid& grid) {
    if (grid.entries.empty()) {
        tuning_error("parameter grid is empty");
    }
    auto entries = grid.entries;
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].second.empty()) {
            tuning_error("parameter \"" + entries[i].first + "\" has an empty value list");
        }
        if (i > 0 && entries[i].first == entries[i - 1].first) {
            tuning_error("duplicate parameter name \"" + entries[i].first + "\"");
        }
    }

    std::size_t count = 1;
    for (const auto& [name, values] : entries) count *= values.size();

    std::vector<Candidate> candidates;
    candidates.reserve(count);
    for (std::size_t index = 0; index < count; ++index) {
        Candidate c;
        c.reserve(entries.size());
        // Rightmost (last sorted name) varies fastest.
        std::size_t remainder = index;
        for (std::size_t e = entries.size(); e-- > 0;) {
            const auto& [name, values] = entries[e];
            c.emplace_back(name, values[remainder % values.size()]);
            remainder /= values.size();
        }
        std::reverse(c.begin(), c.end());
        candidates.push_back(std::move(c));
    }
    return candidates;
}

CvDetail cross_val_detail(const ModelFamilyOps& family, const Candidate& params,
                          const Dataset& dataset, const CvConfig& cv) {
    const FoldPlan plan = stratified_kfold(dataset.target, cv.k, cv.seed);

    CvDetail detail;
    detail.fold_scores.reserve(cv.k);
    detail.fold_pipelines.reserve(cv.k);
    for (std::size_t fold = 0; fold < cv.k; ++fold) {
        const Dataset train = dataset.subset(plan.complement_rows(fold));
        const Dataset held_out = dataset.subset(plan.fold_rows(fold));

        const PipelineParams pipeline = fit_pipeline(train);
        const Dataset train_t = apply_pipeline(pipeline, train);
        const Dataset held_t = apply_pipeline(pipeline, held_out);

        auto model = family.make(params);
        model->fit(train_t.features, train_t.target);
        detail.fold_scores.push_back(score_accuracy(*model, held_t.features, held_t.target));
        detail.fold_pipelines.push_back(pipeline);
    }
    return detail;
}

std::vector<double> cross_val_score(const ModelFamilyOps& family, const Candidate& params,
                                    const Dataset& dataset, const CvConfig& cv) {
    return cross_val_detail(family, params, dataset, cv).fold_scores;
}

SearchResult grid_search(const ModelFamilyOps& family, const ParamGrid& grid,
                         const Dataset& dataset, const CvConfig& cv, std::size_t threads) {
    return run_search(family, expand_grid(grid), dataset, cv, threads);
}

SearchResult randomized_search(const ModelFamilyOps& family, const ParamGrid& grid,
                               std::size_t n_iter, const Dataset& dataset, const CvConfig& cv,
                               std::uint64_t seed, std::size_t threads) {
    if (n_iter == 0) {
        tuning_error("randomized search needs n_iter >= 1");
    }
    auto expanded = expand_grid(grid);
    Rng rng(seed);
    const auto picks =
        rng.sample_without_replacement(std::min(n_iter, expanded.size()), expanded.size());
    std::vector<Candidate> candidates;
    candidates.reserve(picks.size());
    for (std::size_t index : picks) candidates.push_back(expanded[index]);
    return run_search(family, std::move(candidates), dataset, cv, threads);
}

ParamGrid default_grid(ModelFamily family) {
    ParamGrid grid;
    switch (family) {
        case ModelFamily::Knn: {
            std::vector<ParamValue> ks;
            for (std::int64_t k = 1; k <= 20; ++k) ks.emplace_back(k);
            grid.entries.emplace_back("k", std::move(ks));
            break;
        }
        case ModelFamily::LogReg: {
            std::vector<ParamValue> lambdas;
            for (int i = 0; i < 20; ++i) {
                lambdas.emplace_back(std::pow(10.0, -4.0 + 8.0 * i / 19.0));
            }
            grid.entries.emplace_back("l2_lambda", std::move(lambdas));
            break;
        }
        case ModelFamily::Forest: {
            grid.entries.emplace_back(
                "n_trees", std::vector<ParamValue>{std::int64_t{10}, std::int64_t{100},
                                                   std::int64_t{200}, std::int64_t{500},
                                                   std::int64_t{1000}});
            grid.entries.emplace_back(
                "max_depth", std::vector<ParamValue>{std::monostate{}, std::int64_t{3},
                                                     std::int64_t{5}, std::int64_t{10}});
            grid.entries.emplace_back(
                "min_samples_split",
                std::vector<ParamValue>{std::int64_t{2}, std::int64_t{4}, std::int64_t{6}});
            grid.entries.emplace_back(
                "min_samples_leaf",
                std::vector<ParamValue>{std::int64_t{1}, std::int64_t{2}, std::int64_t{4}});
            break;
        }
    }
    return grid;
}

std::string candidates_csv(const SearchResult& result, std::size_t folds) {
    std::string out = "index";
    if (!result.candidates.empty()) {
        for (const auto& [name, value] : result.candidates.front().params) {
            (void)value;
            out += "," + name;
        }
    }
    for (std::size_t f = 0; f < folds; ++f) out += ",fold_" + std::to_string(f);
    out += ",mean,std\n";

    auto fmt = [](double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, ptr);
    };
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
        const CandidateResult& c = result.candidates[i];
        out += std::to_string(i);
        for (const auto& [name, value] : c.params) {
            (void)name;
            out += "," + param_value_to_string(value);
        }
        for (double s : c.fold_scores) out += "," + fmt(s);
        out += "," + fmt(c.mean_score) + "," + fmt(c.std_score) + "\n";
    }
    return out;
}

std::int64_t param_as_int(const Candidate& params, const std::string& name) {
    const ParamValue& value = find_param(params, name);
    if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
    tuning_error("parameter \"" + name + "\" must be an integer");
}

double param_as_real(const Candidate& params, const std::string& name) {
    const ParamValue& value = find_param(params, name);
    if (const auto* d = std::get_if<double>(&value)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    tuning_error("parameter \"" + name + "\" must be a number");
}

std::optional<std::int64_t> param_as_opt_int(const Candidate& params, const std::string& name) {
    const ParamValue& value = find_param(params, name);
    if (std::holds_alternative<std::monostate>(value)) return std::nullopt;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
    tuning_error("parameter \"" + name + "\" must be an integer or null");
}

}  // namespace heartml
