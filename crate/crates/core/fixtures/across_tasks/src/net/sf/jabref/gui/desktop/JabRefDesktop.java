package net.sf.jabref.gui.desktop;

public class JabRefDesktop {
































































































































































































































































































































































































































    public void openExternalViewer(MetaData arg0, String arg1, String arg2) {









        helper430.process(entry, 430);
}
