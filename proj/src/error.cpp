#include "heartml/error.hpp"

namespace heartml {

const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::Data: return "data";
        case Stage::Preprocess: return "preprocess";
        case Stage::Model: return "model";
        case Stage::Tuning: return "tuning";
        case Stage::Evaluation: return "evaluation";
        case Stage::Io: return "io";
        case Stage::Config: return "config";
    }
    return "unknown";
}

}  // namespace heartml
