"""Write the synthetic demo accelerogram to output/record.txt.

The other demos and the sample pipeline config read this file. Swap in a
recorded accelerogram by replacing the file with one in the same format:
a `dt=<seconds>` header line, then one acceleration value (m/s^2) per
line; `#` lines are comments.
"""

from pathlib import Path

from modal_forge import demo_ground_motion

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

record = demo_ground_motion()
path = out_dir / "record.txt"
with open(path, "w", encoding="utf-8") as fh:
    fh.write("# synthetic demo accelerogram (baseline corrected)\n")
    fh.write(f"dt={record.dt!r}\n")
    for value in record.accel:
        fh.write(f"{float(value)!r}\n")

print(f"wrote {path}: {len(record)} samples at dt={record.dt} s, "
      f"peak {max(abs(record.accel)):.3f} m/s^2")
