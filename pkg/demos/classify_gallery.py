"""Walk the gallery: classify each family and show the predicted spectrum."""
from cesarolab import classify, gallery
from cesarolab.spectra import InsufficientClassification, predict

FAMILIES = [("example-1.5", {}), ("remark-3.9", {}), ("remark-4.4", {}),
            ("loglog-weights", {}), ("example-3.4ii", {"s": 3})]

for key, params in FAMILIES:
    cls = classify(gallery(key, params))
    agg = ", ".join(f"{k}={v}" for k, v in cls.aggregates.items())
    print(f"{key}: {agg}")
    try:
        d = predict(cls).to_dict()
        print(f"    spectrum {d['set']}, point spectrum {d['sigma_pt']}")
    except InsufficientClassification as exc:
        print(f"    no prediction: {exc}")
