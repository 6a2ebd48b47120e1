from . import __version__ as app_version

app_name = "da_sfft"
app_title = "DA-SFFT face restoration"
app_publisher = "AtlasAero GmbH"
app_description = "Desk-scale blind face restoration under heavy rain"
app_email = "info@atlasaero.eu"
app_license = "MIT"

# CLI subcommand => handler, resolved lazily by da_sfft.cli
commands = {
    "facegen": "da_sfft.api.facegen.api.generate_corpus",
    "degrade": "da_sfft.api.degradation.api.degrade_corpus",
    "pretrain-encoder": "da_sfft.api.harness.api.pretrain_encoder",
    "align-dafe": "da_sfft.api.harness.api.align_dafe",
    "train": "da_sfft.api.harness.api.train",
    "restore": "da_sfft.api.harness.api.restore",
    "eval": "da_sfft.api.harness.api.evaluate",
    "ablation": "da_sfft.api.harness.api.ablation",
    "gradcheck": "da_sfft.api.harness.api.gradcheck",
}
