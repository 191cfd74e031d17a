"""
Soliton collisions.

Two solitons (c = 0.6 from the left, c = -0.25 from the right) start 2*x0
apart.  Well separated (x0 = 8) they pass through each other and leave almost
nothing behind; started on top of each other (x0 = 1) they shed visible waves.
In the three-component case the collision excites new fronts in components
that started with a single pulse.

Run:  python3 demos/04_collisions.py
"""

from ckg.presets import collision_summary, figure_config
from ckg.runner import simulate

for name in ("fig2", "fig3"):
    result = simulate(figure_config(name))
    print(f"{name}: x0 = {result.config.ic.x0:g}")
    for row in collision_summary(result):
        print(f"  t = {row['t']:4.0f}  radiation outside the two pulses: {100 * row['radiation_psi_1']:.2f}% of peak")

result = simulate(figure_config("fig4"))
print("fig4: three components, x0 = 8")
for row in collision_summary(result):
    print(
        f"  t = {row['t']:5.0f}  psi_2 energy on the left mover's side: {100 * row['left_front_psi_2']:6.2f}%"
        f"   psi_3 energy on the right mover's side: {100 * row['right_front_psi_3']:6.2f}%"
    )
