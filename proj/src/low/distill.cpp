#include "swarm/low/distill.hpp"

#include <fstream>

#include "swarm/nn/checkpoint.hpp"

namespace swarm::low {

void DistillBuffer::add(DistillTuple t) {
    if (tuples_.size() < capacity_) {
        tuples_.push_back(std::move(t));
    } else {
        tuples_[next_] = std::move(t);
        next_ = (next_ + 1) % capacity_;
    }
}

void DistillBuffer::save(const std::string& path) const {
    SWARM_REQUIRE(!tuples_.empty(), "distill buffer: nothing to save");
    const long n = static_cast<long>(tuples_.size());
    nn::Param inputs("distill.inputs", n, tuples_[0].input.size());
    nn::Param actions("distill.actions", n, 2);
    nn::Param patterns("distill.patterns", n, 1);
    for (long i = 0; i < n; ++i) {
        inputs.w.row(i) = tuples_[i].input.transpose();
        actions.w.row(i) = tuples_[i].action.transpose();
        patterns.w(i, 0) = tuples_[i].pattern;
    }
    nn::save_checkpoint(path, {&inputs, &actions, &patterns});
}

DistillBuffer DistillBuffer::load(const std::string& path) {
    // The checkpoint loader enforces pre-known shapes; buffers are sized by
    // the file, so read the container format directly.
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("distill buffer: cannot open " + path);
    in.seekg(12);  // magic + version
    uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    std::vector<std::pair<std::string, nn::MatrixXd>> tensors;
    for (uint64_t i = 0; i < count; ++i) {
        uint32_t name_len = 0;
        in.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        uint64_t rows = 0, cols = 0;
        in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
        in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
        nn::MatrixXd m(rows, cols);
        for (uint64_t r = 0; r < rows; ++r)
            for (uint64_t c = 0; c < cols; ++c)
                in.read(reinterpret_cast<char*>(&m(r, c)), sizeof(double));
        if (!in) throw ContractError("distill buffer: truncated " + path);
        tensors.emplace_back(std::move(name), std::move(m));
    }
    nn::MatrixXd *inputs = nullptr, *actions = nullptr, *patterns = nullptr;
    for (auto& [name, m] : tensors) {
        if (name == "distill.inputs") inputs = &m;
        if (name == "distill.actions") actions = &m;
        if (name == "distill.patterns") patterns = &m;
    }
    SWARM_REQUIRE(inputs && actions && patterns, "distill buffer: tensors missing");
    DistillBuffer buf(static_cast<size_t>(inputs->rows()));
    for (long i = 0; i < inputs->rows(); ++i) {
        DistillTuple t;
        t.input = inputs->row(i).transpose();
        t.action = actions->row(i).transpose();
        t.pattern = static_cast<int>((*patterns)(i, 0));
        buf.add(std::move(t));
    }
    return buf;
}

nn::VectorXd pad_to_student(const nn::VectorXd& teacher_input, int pattern, int student_slots,
                            int lidar_rays) {
    const int teacher_slots = pattern - 1;
    SWARM_REQUIRE(teacher_input.size() == low_input_dim(teacher_slots, lidar_rays),
                  "pad_to_student: teacher width mismatch");
    nn::VectorXd out = nn::VectorXd::Zero(low_input_dim(student_slots, lidar_rays));
    out.head(2) = teacher_input.head(2);
    out.segment(2, 4 * teacher_slots) = teacher_input.segment(2, 4 * teacher_slots);
    out.tail(lidar_rays) = teacher_input.tail(lidar_rays);
    return out;
}

void collect_teacher_tuples(LowPolicy& teacher, int pattern, const LowEnvOptions& env_opt,
                            int steps, int student_slots, uint64_t seed, DistillBuffer& buffer) {
    FormationEnv env(env_opt);
    const int lidar = env_opt.cfg.env.lidar_rays;
    int collected = 0;
    uint64_t episode = 0;
    while (collected < steps) {
        env.reset(Rng::derive(seed, 0xD15, episode++));
        for (int t = 0; t < env.horizon() && collected < steps; ++t) {
            nn::MatrixXd inputs = env.observe_inputs();
            nn::MatrixXd mu = teacher.mean_batch(inputs);
            for (int i = 0; i < inputs.rows() && collected < steps; ++i) {
                DistillTuple tup;
                tup.input = pad_to_student(inputs.row(i).transpose(), pattern, student_slots, lidar);
                tup.action = mu.row(i).transpose();
                tup.pattern = pattern;
                buffer.add(std::move(tup));
                ++collected;
            }
            env.step(mu);
        }
    }
}

DistillReport distill(LowPolicy& student, const DistillBuffer& buffer, int epochs, int batch_size,
                      double lr, uint64_t seed) {
    SWARM_REQUIRE(buffer.size() > 0, "distill: empty buffer");
    nn::ParamList params;
    student.collect_params(params);
    nn::Adam opt(params, lr);
    Rng rng(Rng::derive(seed, 0xD157111));

    const int width = static_cast<int>(buffer.at(0).input.size());
    DistillReport report;
    report.loss_curve.reserve(epochs);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const int B = static_cast<int>(std::min<size_t>(batch_size, buffer.size()));
        nn::MatrixXd x(B, width), target(B, 2);
        for (int b = 0; b < B; ++b) {
            const DistillTuple& t = buffer.at(rng.uniform_index(buffer.size()));
            x.row(b) = t.input.transpose();
            target.row(b) = t.action.transpose();
        }
        opt.zero_grad();
        nn::DenseNet::Cache ct, ca, ch;
        nn::MatrixXd fused =
            student.trunk_task().forward(kTaskScale * x.leftCols(student.task_dim()), ct) +
            student.trunk_avoid().forward(kLidarScale * x.rightCols(student.lidar_dim()), ca);
        nn::MatrixXd mu = student.head().forward(fused, ch);
        nn::MatrixXd err = mu - target;
        double loss = err.array().square().sum() / B;
        nn::MatrixXd dmu = 2.0 * err / B;
        nn::MatrixXd dfused = student.head().backward(ch, dmu);
        student.trunk_task().backward(ct, dfused);
        student.trunk_avoid().backward(ca, dfused);
        opt.step();
        report.loss_curve.push_back(loss);
    }
    return report;
}

double distill_mse(LowPolicy& student, const DistillBuffer& buffer, size_t begin, size_t end) {
    SWARM_REQUIRE(begin < end && end <= buffer.size(), "distill_mse: bad range");
    double sum = 0.0;
    for (size_t i = begin; i < end; ++i) {
        nn::MatrixXd mu = student.mean_batch(buffer.at(i).input.transpose());
        sum += (mu.row(0).transpose() - buffer.at(i).action).squaredNorm();
    }
    return sum / static_cast<double>(end - begin);
}

}  // namespace swarm::low
