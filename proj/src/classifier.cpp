#include "heartml/classifier.hpp"

#include "heartml/error.hpp"

namespace heartml {

std::string family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::LogReg: return "logreg";
        case ModelFamily::Knn: return "knn";
        case ModelFamily::Forest: return "forest";
    }
    return "unknown";
}

ModelFamily family_from_name(const std::string& name) {
    if (name == "logreg") return ModelFamily::LogReg;
    if (name == "knn") return ModelFamily::Knn;
    if (name == "forest") return ModelFamily::Forest;
    throw Error(Stage::Config, ErrorKind::Config,
                "unknown model family \"" + name + "\" (expected logreg, knn or forest)");
}

double score_accuracy(const Classifier& model, const Matrix& x, const std::vector<int>& y) {
    if (x.rows == 0) return 0.0;
    std::size_t correct = 0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        if (model.predict(x.row(r)) == y[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(x.rows);
}

}  // namespace heartml
