package net.sf.jabref.gui;

public class BasePanel {




















































































































































































































































































































































































































































































































































































































































































































































































































































































































































    public void runCommand(String arg0) {
















































        JabRefDesktop.openExternalViewer(metaData(), link.toString(), field);
}
