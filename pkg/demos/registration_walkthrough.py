"""A guided tour of one interactive session on the registration knowledge base.

Run with: python demos/registration_walkthrough.py
"""

from mxassist import Role, Session, Status, load_registration_kb


def show(report):
    for entry in report.symbols:
        value = "" if entry.value is None else " = %s" % entry.value
        print("  %-18s %-4s %s%s" % (entry.name, entry.kind.value, entry.status.value, value))
    print("  banners: definite=%s contingent=%s" % (report.definite, report.contingent))


def main():
    kb = load_registration_kb()
    session = Session(kb)

    print("A buyer tentatively registers the sale as Social:")
    session.assert_fact("RegistrationType", "Social", Role.DECISION)
    show(session.report())

    print("\nThey then observe that the house is NOT social housing:")
    outcome = session.assert_fact("SocialHousing", False, Role.OBSERVATION)
    assert not outcome.accepted
    print("  blocked; retracting any of these would let the observation in:")
    for hint in outcome.hints:
        print("    retract " + ", ".join("%s = %s" % (f.name, f.value) for f in hint))

    print("\nFollowing the hint and retrying:")
    session.retract("RegistrationType")
    session.assert_fact("SocialHousing", False, Role.OBSERVATION)
    show(session.report())

    print("\nObserving a normal rent settles everything:")
    session.assert_fact("LowRent", False, Role.OBSERVATION)
    report = session.report()
    show(report)
    assert report.definite
    consequences = [
        e for e in report.symbols if e.status is Status.DECISION_CONSEQUENCE
    ]
    print(
        "\nDone: %s follow without any further observation."
        % ", ".join("%s=%s" % (e.name, e.value) for e in consequences)
    )


if __name__ == "__main__":
    main()
