#ifndef TOPICNET_HASH_H_
#define TOPICNET_HASH_H_

#include <string>
#include <string_view>

namespace topicnet {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace topicnet

#endif  // TOPICNET_HASH_H_
