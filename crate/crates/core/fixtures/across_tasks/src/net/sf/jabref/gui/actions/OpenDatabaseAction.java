package net.sf.jabref.gui.actions;

public class OpenDatabaseAction {
































































































































































































































































    public void loadDatabase(File arg0, Charset arg1) {







        int count268 = entry.size();
}
