// Serves GeoJSON fixtures as an Overpass-style endpoint for offline demos:
//   xenakis-stub-provider --port 8090 tests/fixtures/grid.geojson
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xenakis/error.hpp"
#include "xenakis/stub_provider.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Overpass-style stub serving GeoJSON fixtures", "xenakis-stub-provider"};
  std::string host = "127.0.0.1";
  int port = 8090;
  std::vector<std::string> files;
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  app.add_option("fixtures", files, "GeoJSON FeatureCollections to serve")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    xenakis::StubProvider stub(xenakis::StubProvider::load_files(files));
    std::cerr << "stub provider on http://" << host << ":" << port
              << xenakis::StubProvider::kPath << "\n";
    return stub.listen(host, port) ? 0 : 1;
  } catch (const xenakis::Error& e) {
    std::cerr << "xenakis-stub-provider: " << e.what() << "\n";
    return 2;
  }
}
