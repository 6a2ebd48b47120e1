from da_sfft.api.degradation.params import DegradationParams


class DegradationParamsRepository:
    def save(self, path: str, params: DegradationParams):
        with open(path, "w") as stream:
            stream.write(params.to_text())

    def load(self, path: str) -> DegradationParams:
        with open(path) as stream:
            return DegradationParams.from_text(stream.read())
