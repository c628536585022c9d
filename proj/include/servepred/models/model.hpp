// model.hpp - uniform train/predict/importance/serialize surface over the
// five classifier kinds
#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "servepred/models/common.hpp"
#include "servepred/models/dataset.hpp"
#include "servepred/models/forest.hpp"
#include "servepred/models/logistic.hpp"
#include "servepred/models/mlp.hpp"
#include "servepred/models/svm.hpp"
#include "servepred/models/tree.hpp"

namespace servepred {

struct TrainedModel {
    ModelKind kind = ModelKind::LR;
    uint64_t training_seed = 0;
    Hyperparams hyperparameters;
    std::variant<ConstantModel, LogisticModel, TreeModel, ForestModel, SvmModel, MlpModel>
        parameters;

    bool degenerate() const {
        return std::holds_alternative<ConstantModel>(parameters);
    }
};

inline TrainedModel train_logistic(const Dataset& train, const Hyperparams& hp = {},
                                   uint64_t seed = 0) {
    TrainedModel m{ModelKind::LR, seed, hp, {}};
    if (!train.y.empty() && single_class(train.y)) {
        m.parameters = ConstantModel{train.y.front()};
        return m;
    }
    m.parameters = fit_logistic(train, hp).model;
    return m;
}

inline TrainedModel train_tree(const Dataset& train, const Hyperparams& hp = {},
                               uint64_t seed = 0) {
    TrainedModel m{ModelKind::DT, seed, hp, {}};
    m.parameters = fit_tree(train.X, train.y, std::max(2, n_classes_of(train.y)), hp,
                            /*mtry=*/0, nullptr, nullptr);
    return m;
}

inline TrainedModel train_forest(const Dataset& train, const Hyperparams& hp = {},
                                 uint64_t seed = 0) {
    TrainedModel m{ModelKind::RF, seed, hp, {}};
    m.parameters = fit_forest(train.X, train.y, std::max(2, n_classes_of(train.y)), hp, seed);
    return m;
}

inline TrainedModel train_svm(const Dataset& train, const Hyperparams& hp = {},
                              uint64_t seed = 0) {
    TrainedModel m{ModelKind::SVM, seed, hp, {}};
    if (!train.y.empty() && single_class(train.y)) {
        m.parameters = ConstantModel{train.y.front()};
        return m;
    }
    m.parameters = fit_svm(train, hp);
    return m;
}

inline TrainedModel train_mlp(const Dataset& train, const Hyperparams& hp = {},
                              uint64_t seed = 0) {
    TrainedModel m{ModelKind::NN, seed, hp, {}};
    m.parameters = fit_mlp(train, hp, seed);
    return m;
}

inline TrainedModel train_model(ModelKind kind, const Dataset& train,
                                const Hyperparams& hp = {}, uint64_t seed = 0) {
    switch (kind) {
        case ModelKind::LR: return train_logistic(train, hp, seed);
        case ModelKind::DT: return train_tree(train, hp, seed);
        case ModelKind::RF: return train_forest(train, hp, seed);
        case ModelKind::SVM: return train_svm(train, hp, seed);
        case ModelKind::NN: return train_mlp(train, hp, seed);
    }
    throw DataError("unknown model kind");
}

namespace detail {

inline int model_columns(const TrainedModel& m) {
    return std::visit(
        [](const auto& impl) -> int {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, ConstantModel>)
                return -1;  // any width
            else
                return impl.n_features;
        },
        m.parameters);
}

}  // namespace detail

inline std::vector<int> predict(const TrainedModel& m, const Matrix& X) {
    if (X.rows == 0) return {};
    int want = detail::model_columns(m);
    if (want >= 0 && static_cast<int>(X.cols) != want)
        throw ShapeError("predict: expected " + std::to_string(want) + " columns, got " +
                         std::to_string(X.cols));
    std::vector<int> out(X.rows);
    std::visit(
        [&](const auto& impl) {
            using T = std::decay_t<decltype(impl)>;
            for (size_t i = 0; i < X.rows; ++i) {
                const double* x = X.row(i);
                if constexpr (std::is_same_v<T, ConstantModel>) {
                    out[i] = impl.cls;
                } else if constexpr (std::is_same_v<T, LogisticModel>) {
                    std::vector<double> p(impl.n_classes);
                    impl.proba(x, p.data());
                    out[i] = argmax_lowest(p);
                } else if constexpr (std::is_same_v<T, SvmModel>) {
                    std::vector<double> mg(impl.n_classes);
                    impl.margins(x, mg.data());
                    out[i] = argmax_lowest(mg);
                } else {
                    out[i] = impl.predict_row(x);
                }
            }
        },
        m.parameters);
    return out;
}

// Gini importances for tree-based models, (name, importance) sorted
// descending. Throws UnsupportedModel otherwise.
inline std::vector<std::pair<std::string, double>> feature_importance(
    const TrainedModel& m, const std::vector<std::string>& names) {
    std::vector<double> imp;
    if (const auto* t = std::get_if<TreeModel>(&m.parameters))
        imp = tree_importances(*t);
    else if (const auto* f = std::get_if<ForestModel>(&m.parameters))
        imp = forest_importances(*f);
    else
        throw UnsupportedModel("feature_importance requires a DT or RF model");
    std::vector<std::pair<std::string, double>> out;
    for (size_t j = 0; j < imp.size(); ++j)
        out.emplace_back(j < names.size() ? names[j] : "f" + std::to_string(j), imp[j]);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

// ---- serialization (versioned text, exact doubles) -------------------------

namespace detail {

inline void write_vec(std::ostream& os, const std::vector<double>& v) {
    os << v.size();
    for (double x : v) os << ' ' << fmt_double(x);
    os << '\n';
}

inline std::vector<double> read_vec(std::istream& is) {
    size_t n;
    if (!(is >> n)) throw DataError("model file: bad vector length");
    std::vector<double> v(n);
    for (auto& x : v)
        if (!(is >> x)) throw DataError("model file: bad vector element");
    return v;
}

inline void write_ivec(std::ostream& os, const std::vector<int>& v) {
    os << v.size();
    for (int x : v) os << ' ' << x;
    os << '\n';
}

inline std::vector<int> read_ivec(std::istream& is) {
    size_t n;
    if (!(is >> n)) throw DataError("model file: bad vector length");
    std::vector<int> v(n);
    for (auto& x : v)
        if (!(is >> x)) throw DataError("model file: bad vector element");
    return v;
}

inline void write_tree(std::ostream& os, const TreeModel& t) {
    os << "tree " << t.n_features << ' ' << t.n_classes << ' ' << t.nodes.size() << '\n';
    for (const TreeNode& n : t.nodes)
        os << n.feature << ' ' << fmt_double(n.threshold) << ' ' << n.left << ' '
           << n.right << ' ' << n.leaf_class << ' ' << fmt_double(n.impurity) << ' '
           << n.n_samples << '\n';
}

inline TreeModel read_tree(std::istream& is) {
    std::string tag;
    size_t count;
    TreeModel t;
    if (!(is >> tag >> t.n_features >> t.n_classes >> count) || tag != "tree")
        throw DataError("model file: bad tree header");
    t.nodes.resize(count);
    for (TreeNode& n : t.nodes)
        if (!(is >> n.feature >> n.threshold >> n.left >> n.right >> n.leaf_class >>
              n.impurity >> n.n_samples))
            throw DataError("model file: bad tree node");
    return t;
}

}  // namespace detail

inline void save_model(const TrainedModel& m, std::ostream& os) {
    os << "servepred_model 1\n";
    os << "kind " << to_string(m.kind) << '\n';
    os << "seed " << m.training_seed << '\n';
    std::visit(
        [&](const auto& impl) {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, ConstantModel>) {
                os << "constant " << impl.cls << '\n';
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                os << "logistic " << impl.n_features << ' ' << impl.n_classes << '\n';
                detail::write_vec(os, impl.W.data);
                detail::write_vec(os, impl.b);
            } else if constexpr (std::is_same_v<T, SvmModel>) {
                os << "svm " << impl.n_features << ' ' << impl.n_classes << '\n';
                detail::write_vec(os, impl.W.data);
                detail::write_vec(os, impl.b);
            } else if constexpr (std::is_same_v<T, TreeModel>) {
                detail::write_tree(os, impl);
            } else if constexpr (std::is_same_v<T, ForestModel>) {
                os << "forest " << impl.n_features << ' ' << impl.n_classes << ' '
                   << impl.trees.size() << '\n';
                for (const TreeModel& t : impl.trees) detail::write_tree(os, t);
            } else if constexpr (std::is_same_v<T, MlpModel>) {
                os << "mlp " << impl.n_features << ' ' << impl.h1 << ' ' << impl.h2 << ' '
                   << impl.n_classes << '\n';
                detail::write_vec(os, impl.W1);
                detail::write_vec(os, impl.b1);
                detail::write_vec(os, impl.W2);
                detail::write_vec(os, impl.b2);
                detail::write_vec(os, impl.W3);
                detail::write_vec(os, impl.b3);
            }
        },
        m.parameters);
    os << "end\n";
}

inline std::string save_model_string(const TrainedModel& m) {
    std::ostringstream os;
    save_model(m, os);
    return os.str();
}

inline TrainedModel load_model(std::istream& is) {
    std::string magic, word;
    int version;
    if (!(is >> magic >> version) || magic != "servepred_model" || version != 1)
        throw DataError("model file: bad magic/version");
    TrainedModel m;
    if (!(is >> word) || word != "kind") throw DataError("model file: missing kind");
    std::string kind;
    is >> kind;
    m.kind = model_kind_from(kind);
    if (!(is >> word) || word != "seed") throw DataError("model file: missing seed");
    is >> m.training_seed;

    std::string tag;
    std::streampos before = is.tellg();
    if (!(is >> tag)) throw DataError("model file: missing payload");
    if (tag == "constant") {
        ConstantModel c;
        is >> c.cls;
        m.parameters = c;
    } else if (tag == "logistic" || tag == "svm") {
        int f, k;
        is >> f >> k;
        Matrix W(k, f);
        W.data = detail::read_vec(is);
        if (W.data.size() != size_t(k) * f) throw DataError("model file: bad weight size");
        std::vector<double> b = detail::read_vec(is);
        if (tag == "logistic")
            m.parameters = LogisticModel{std::move(W), std::move(b), f, k};
        else
            m.parameters = SvmModel{std::move(W), std::move(b), f, k};
    } else if (tag == "tree") {
        is.seekg(before);
        m.parameters = detail::read_tree(is);
    } else if (tag == "forest") {
        ForestModel fm;
        size_t count;
        is >> fm.n_features >> fm.n_classes >> count;
        fm.trees.reserve(count);
        for (size_t i = 0; i < count; ++i) fm.trees.push_back(detail::read_tree(is));
        m.parameters = std::move(fm);
    } else if (tag == "mlp") {
        MlpModel mm;
        is >> mm.n_features >> mm.h1 >> mm.h2 >> mm.n_classes;
        mm.W1 = detail::read_vec(is);
        mm.b1 = detail::read_vec(is);
        mm.W2 = detail::read_vec(is);
        mm.b2 = detail::read_vec(is);
        mm.W3 = detail::read_vec(is);
        mm.b3 = detail::read_vec(is);
        m.parameters = std::move(mm);
    } else {
        throw DataError("model file: unknown payload tag '" + tag + "'");
    }
    if (!(is >> word) || word != "end") throw DataError("model file: missing end marker");
    return m;
}

}  // namespace servepred
