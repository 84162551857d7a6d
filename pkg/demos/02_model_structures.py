"""The model 3- and 4-forms and their stabilizer algebras.

The seven-term 3-form on R^7 and the fourteen-term self-dual 4-form on R^8
are hard-coded with exact coefficients; everything else about them is
computed, including the dimensions 14 and 21 of their stabilizers inside the
antisymmetric matrices.
"""
from caligeo import hodge_star, phi0, spin7_omega0, star_phi0, verify_product_structures, wedge
from caligeo.forms import norm_squared
from caligeo.structures import stabilizer_algebra

ph = phi0()
print("phi0            =", ph.to_text())
print("*phi0           =", hodge_star(ph).to_text())
print("matches table   :", hodge_star(ph) == star_phi0())

om = spin7_omega0()
print("omega0 terms    =", len(om.terms))
print("self-dual       :", hodge_star(om) == om)
print("om ^ om         =", wedge(om, om).to_text(), " (14 vol)")
print("|phi0|^2, |om|^2 =", norm_squared(ph), norm_squared(om))

# The stabilizer algebra is computed by exact elimination: the annihilator
# of the form under the Lie derivative action of antisymmetric matrices.
for label, form, n in (("3-form", ph, 7), ("4-form", om, 8)):
    alg = stabilizer_algebra(form)
    dim_so = n * (n - 1) // 2
    print(f"stab({label})   : dim {alg.dimension} inside so({n}) of dim {dim_so}")

# The splitting identities (unitary frames inside both models) run as a
# named report; the same routine backs `caligeo verify structures`.
print()
print(verify_product_structures().to_text())
