#include <istream>
#include <ostream>

#include "occu/error.hpp"
#include "occu/lstm.hpp"
#include "occu/text_format.hpp"

namespace occu::lstm {

void save_model(std::ostream& out, const LstmModel& model) {
    const auto& c = model.config;
    out << "lstm_v1\n";
    out << "neurons " << c.neurons << "\nlayers " << c.layers << "\nlag " << c.lag << '\n';
    out << "batch_size " << c.batch_size << "\nepochs " << c.epochs << "\nheads " << c.heads << '\n';
    out << "peepholes " << (c.peepholes ? 1 : 0) << "\nseed " << c.seed << '\n';
    out << "learning_rate " << text::format_double(c.learning_rate) << '\n';
    out << "beta1 " << text::format_double(c.beta1) << "\nbeta2 " << text::format_double(c.beta2) << '\n';
    out << "epsilon " << text::format_double(c.epsilon) << '\n';
    out << "forget_bias " << text::format_double(c.forget_bias) << '\n';
    out << "difference_order " << c.difference_order << '\n';
    out << "scales";
    for (int s : model.scales) out << ' ' << s;
    out << '\n';
    for (const auto& s : model.scalers) {
        out << "scaler " << to_string(s.kind) << ' ' << text::format_double(s.min) << ' '
            << text::format_double(s.max) << '\n';
    }
    model.params.for_each_tensor([&](const auto& t) {
        out << "tensor " << t.rows() << ' ' << t.cols();
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index col = 0; col < t.cols(); ++col) out << ' ' << text::format_double(t(r, col));
        out << '\n';
    });
}

LstmModel load_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || text::split_words(line) != std::vector<std::string>{"lstm_v1"}) {
        throw DataError("not an lstm_v1 model file");
    }
    LstmModel model;
    auto& c = model.config;
    std::vector<std::vector<std::string>> tensors;
    while (std::getline(in, line)) {
        auto w = text::split_words(line);
        if (w.empty()) continue;
        const auto& key = w[0];
        auto arg = [&](std::size_t i) -> const std::string& {
            if (w.size() <= i) throw DataError("lstm_v1: '" + key + "' is missing a value");
            return w[i];
        };
        auto integer = [&](std::size_t i) { return static_cast<int>(text::parse_integer(arg(i), "lstm_v1 " + key)); };
        auto real = [&](std::size_t i) { return text::parse_double(arg(i), "lstm_v1 " + key); };
        if (key == "neurons") c.neurons = integer(1);
        else if (key == "layers") c.layers = integer(1);
        else if (key == "lag") c.lag = integer(1);
        else if (key == "batch_size") c.batch_size = integer(1);
        else if (key == "epochs") c.epochs = integer(1);
        else if (key == "heads") c.heads = integer(1);
        else if (key == "peepholes") c.peepholes = integer(1) != 0;
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(arg(1)));
        else if (key == "learning_rate") c.learning_rate = real(1);
        else if (key == "beta1") c.beta1 = real(1);
        else if (key == "beta2") c.beta2 = real(1);
        else if (key == "epsilon") c.epsilon = real(1);
        else if (key == "forget_bias") c.forget_bias = real(1);
        else if (key == "difference_order") c.difference_order = integer(1);
        else if (key == "scales") {
            for (std::size_t i = 1; i < w.size(); ++i) model.scales.push_back(integer(i));
        } else if (key == "scaler") {
            model.scalers.push_back({scaler_kind_from_string(arg(1)), real(2), real(3)});
        } else if (key == "tensor") {
            tensors.push_back(std::move(w));
        } else {
            throw DataError("lstm_v1: unknown key '" + key + "'");
        }
    }
    c.validate();
    model.params = Parameters::zeros(c);
    std::size_t next = 0;
    model.params.for_each_tensor([&](auto& t) {
        if (next >= tensors.size()) throw DataError("lstm_v1: too few tensors");
        const auto& w = tensors[next++];
        if (w.size() < 3 || text::parse_integer(w[1], "lstm_v1 tensor") != t.rows() ||
            text::parse_integer(w[2], "lstm_v1 tensor") != t.cols() ||
            w.size() != 3 + static_cast<std::size_t>(t.size())) {
            throw DataError("lstm_v1: tensor " + std::to_string(next) + " has the wrong shape");
        }
        std::size_t k = 3;
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index col = 0; col < t.cols(); ++col) t(r, col) = text::parse_double(w[k++], "lstm_v1 tensor");
    });
    if (next != tensors.size()) throw DataError("lstm_v1: too many tensors");
    if (model.scales.size() != model.scalers.size() ||
        (!model.scalers.empty() && model.scalers.size() != static_cast<std::size_t>(c.heads))) {
        throw DataError("lstm_v1: scale/scaler entries do not match the head count");
    }
    return model;
}

}  // namespace occu::lstm
