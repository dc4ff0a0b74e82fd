from kwplan.tracker.kw_tracker import KWTracker


tracker = KWTracker()
