#include "nnm/error.hpp"

#include <exception>

namespace nnm {

void rethrow_with_context(const std::string& context) {
    try {
        throw;
    } catch (const UndefinedContrastError& e) {
        throw UndefinedContrastError(e.zero_min_count(), context + ": " + e.what());
    } catch (const ZeroNormError& e) {
        throw ZeroNormError(context + ": " + e.what(), e.row());
    } catch (const DegenerateDataError& e) {
        throw DegenerateDataError(context + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(context + ": " + e.what());
    } catch (const Error& e) {
        throw Error(context + ": " + e.what());
    }
}

}  // namespace nnm
