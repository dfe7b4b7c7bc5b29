#include "swarm/harness/similarity.hpp"

#include "swarm/common.hpp"

namespace swarm::harness {

MatrixXd cosine_matrix(const std::vector<VectorXd>& messages) {
    const int n = static_cast<int>(messages.size());
    MatrixXd out = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double ni = messages[i].norm();
        for (int j = i; j < n; ++j) {
            double nj = messages[j].norm();
            double sim = 0.0;
            if (ni > 0.0 && nj > 0.0) sim = messages[i].dot(messages[j]) / (ni * nj);
            out(i, j) = sim;
            out(j, i) = sim;
        }
    }
    return out;
}

std::vector<MatrixXd> similarity_analysis(const std::vector<std::vector<VectorXd>>& message_log,
                                          int decision_interval) {
    SWARM_REQUIRE(decision_interval >= 1, "similarity_analysis: bad interval");
    std::vector<MatrixXd> out;
    for (size_t t = 0; t < message_log.size(); t += decision_interval)
        out.push_back(cosine_matrix(message_log[t]));
    return out;
}

}  // namespace swarm::harness
